#include <cstdio>
#include <cstdlib>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "pwl/domains.hpp"
#include "pwl/extended.hpp"
#include "pwl/io.hpp"
#include "pwl/reductions.hpp"
#include "pwl/synthesizer.hpp"

#include "ma_instances.hpp"

namespace {

struct CmdResult {
    int status = -1;
    std::string out;
};

// Runs the installed binary with stderr discarded; stdout is the
// machine-readable channel under test.
CmdResult run_cli(const std::string &args) {
    const char *cli = std::getenv("PWL_CLI");
    REQUIRE_MESSAGE(cli != nullptr, "PWL_CLI must point at the command-line binary");
    const std::string cmd = std::string(cli) + " " + args + " 2>/dev/null";
    FILE *pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CmdResult r;
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int rc = pclose(pipe);
    REQUIRE(rc != -1);
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

// Input files shared by the smoke tests, written once per process.
struct Scratch {
    std::string dir;
    std::string sys, plan, halfplan, cnf, cnfplan, emptyplan, ext, ma, mastall, maplans, mastallplans, graph;

    Scratch() {
        char tmpl[] = "/tmp/pwl_cli_XXXXXX";
        if (mkdtemp(tmpl) == nullptr) throw std::runtime_error("mkdtemp failed");
        dir = tmpl;

        const pwl::PwlSystem intro = pwl::gen_intro_example();
        sys = dir + "/sys.json";
        pwl::write_text_file(sys, pwl::system_to_json(intro));

        const auto p = pwl::synthesize(intro, 3);
        plan = dir + "/plan.json";
        pwl::write_text_file(plan, pwl::plan_to_json(intro.state_names, intro.action_names, *p));

        pwl::PlanTable half;
        half.horizon = 2;
        half.entries.emplace(pwl::HistoryKey::from_ids({0}), 2);
        halfplan = dir + "/halfplan.json";
        pwl::write_text_file(halfplan, pwl::plan_to_json(intro.state_names, intro.action_names, half));

        cnf = dir + "/phi.dimacs";
        pwl::write_text_file(cnf, "p cnf 3 1\n1 -2 3 0\n");

        pwl::Cnf3 phi;
        phi.num_vars = 3;
        phi.clauses.push_back({{pwl::Lit{1, true}, pwl::Lit{2, false}, pwl::Lit{3, true}}});
        const pwl::PwlSystem enc = pwl::system_from_cnf(phi);
        const pwl::PlanTable cp = pwl::plan_from_assignment(phi, {1, 0, 1}, enc);
        cnfplan = dir + "/cnfplan.json";
        pwl::write_text_file(cnfplan, pwl::plan_to_json(enc.state_names, enc.action_names, cp));

        emptyplan = dir + "/emptyplan.json";
        pwl::write_text_file(emptyplan, "{\"horizon\": 4, \"entries\": []}\n");

        ext = dir + "/ext.json";
        pwl::write_text_file(ext, pwl::extended_to_json(pwl::embed_basic(intro)));

        const auto instances = testutil::ma_instances();
        ma = dir + "/ma.json";
        pwl::write_text_file(ma, pwl::ma_to_json(instances[0].ms));
        mastall = dir + "/mastall.json";
        pwl::write_text_file(mastall, pwl::ma_to_json(instances[2].ms));

        pwl::MultiAgentPlan mp;
        for (int ag = 0; ag < 2; ++ag) {
            pwl::PlanTable ap;
            ap.horizon = 2;
            ap.entries.emplace(pwl::HistoryKey::from_ids({0}), 0);
            ap.entries.emplace(pwl::HistoryKey::from_ids({0, 0, 1}), 0);
            mp.agents[static_cast<std::size_t>(ag)].names.push_back("go" + std::to_string(ag + 1));
            mp.agents[static_cast<std::size_t>(ag)].plans.push_back(std::move(ap));
        }
        maplans = dir + "/maplans.json";
        pwl::write_text_file(maplans, pwl::ma_plan_to_json(instances[0].ms, mp));
        mastallplans = dir + "/mastallplans.json";
        pwl::write_text_file(mastallplans, pwl::ma_plan_to_json(instances[2].ms, mp));

        graph = dir + "/graph.json";
        pwl::write_text_file(graph, R"({
            "vertices": ["home", "fork", "left", "right", "market"],
            "edges": [
                {"label": "walk", "from": "home", "to": "fork"},
                {"label": "walk", "from": "left", "to": "market"},
                {"label": "back", "from": "left", "to": "fork"},
                {"label": "back", "from": "right", "to": "fork"}
            ],
            "uncertain": [{"label": "take", "from": "fork", "endpoints": ["left", "right"]}],
            "start": "home",
            "target": "market"
        })");
    }
};

const Scratch &scratch() {
    static Scratch s;
    return s;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
    CHECK(run_cli("").status == 2);
    CHECK(run_cli("frobnicate").status == 2);
    CHECK(run_cli("verify").status == 2);
    CHECK(run_cli("verify --system " + scratch().sys + " --plan " + scratch().plan + " --format xml").status == 2);
    CHECK(run_cli("verify --system /nonexistent.json --plan " + scratch().plan).status == 2);
    CHECK(run_cli("--help").status == 0);
}

TEST_CASE("validate reports the detected kind") {
    auto r = run_cli("validate --system " + scratch().sys);
    CHECK(r.status == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["kind"] == "basic");
    CHECK(j["valid"] == true);
    CHECK(j["behaviors"] == 2);

    r = run_cli("validate --system " + scratch().sys + " --plan " + scratch().plan);
    CHECK(r.status == 0);
    j = nlohmann::json::parse(r.out);
    CHECK(j["plan_entries"] == 5);
    CHECK(j["plan_horizon"] == 3);

    CHECK(nlohmann::json::parse(run_cli("validate --system " + scratch().ext).out)["kind"] == "extended");
    CHECK(nlohmann::json::parse(run_cli("validate --system " + scratch().ma).out)["kind"] == "multi_agent");
}

TEST_CASE("verify exit code tracks the verdict") {
    auto r = run_cli("verify --system " + scratch().sys + " --plan " + scratch().plan);
    CHECK(r.status == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["satisfactory"] == true);
    CHECK(j["satisfied_count"] == 2);

    CHECK(run_cli("verify --system " + scratch().sys + " --plan " + scratch().halfplan).status == 1);
    CHECK(run_cli("verify --system " + scratch().sys + " --plan " + scratch().halfplan + " --threshold 0.5").status ==
          0);
    CHECK(run_cli("verify --system " + scratch().sys + " --plan " + scratch().plan + " --horizon 1").status == 1);
    CHECK(run_cli("verify --system " + scratch().sys + " --plan " + scratch().plan + " --threshold 0").status == 2);
}

TEST_CASE("simulate follows one behavior") {
    auto r = run_cli("simulate --system " + scratch().sys + " --plan " + scratch().plan + " --behavior E1");
    CHECK(r.status == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["behavior"] == "E1");
    CHECK(j["outcome"] == "goal_reached");
    CHECK(j["final_state"] == "gA");

    CHECK(run_cli("simulate --system " + scratch().sys + " --plan " + scratch().plan +
                  " --behavior E1 --horizon 1")
              .status == 1);
    CHECK(run_cli("simulate --system " + scratch().sys + " --plan " + scratch().halfplan + " --behavior E2").status ==
          1);
    CHECK(run_cli("simulate --system " + scratch().sys + " --plan " + scratch().plan + " --behavior zz").status == 2);
}

TEST_CASE("shrink emits a plan at the branch-length bound") {
    auto r = run_cli("shrink --system " + scratch().sys + " --plan " + scratch().plan);
    CHECK(r.status == 0);
    const pwl::PwlSystem intro = pwl::gen_intro_example();
    const pwl::PlanTable shrunk = pwl::load_plan(intro.state_names, intro.action_names, r.out);
    CHECK(shrunk.horizon == 12);
    CHECK_FALSE(shrunk.entries.empty());

    CHECK(run_cli("shrink --system " + scratch().sys + " --plan " + scratch().halfplan).status == 2);
}

TEST_CASE("synthesize exit code tracks plan existence") {
    auto r = run_cli("synthesize --system " + scratch().sys + " --horizon 3");
    CHECK(r.status == 0);
    const pwl::PwlSystem intro = pwl::gen_intro_example();
    const pwl::PlanTable p = pwl::load_plan(intro.state_names, intro.action_names, r.out);
    CHECK(p.size() == 5);

    r = run_cli("synthesize --system " + scratch().sys + " --horizon 2");
    CHECK(r.status == 1);
    CHECK(r.out.empty());

    // Default horizon is wide enough for the bundled example.
    CHECK(run_cli("synthesize --system " + scratch().sys).status == 0);
}

TEST_CASE("formula commands invert each other") {
    auto r = run_cli("from-cnf --cnf " + scratch().cnf);
    CHECK(r.status == 0);
    const pwl::PwlSystem enc = pwl::load_system(r.out);
    CHECK(enc.num_states() == 6);

    r = run_cli("plan-from-assignment --cnf " + scratch().cnf + " --assignment 101");
    CHECK(r.status == 0);
    const pwl::PlanTable p = pwl::load_plan(enc.state_names, enc.action_names, r.out);
    CHECK(p.horizon == 4);

    // 010 falsifies the only clause.
    r = run_cli("plan-from-assignment --cnf " + scratch().cnf + " --assignment 0,1,0");
    CHECK(r.status == 1);
    CHECK(r.out.empty());

    r = run_cli("assignment-from-plan --cnf " + scratch().cnf + " --plan " + scratch().cnfplan);
    CHECK(r.status == 0);
    CHECK(nlohmann::json::parse(r.out)["assignment"] == nlohmann::json({1, 0, 1}));

    CHECK(run_cli("assignment-from-plan --cnf " + scratch().cnf + " --plan " + scratch().emptyplan).status == 1);
}

TEST_CASE("generators write loadable systems") {
    auto r = run_cli("gen intro");
    CHECK(r.status == 0);
    CHECK(r.out == pwl::system_to_json(pwl::gen_intro_example()));

    r = run_cli("gen transport --graph " + scratch().graph);
    CHECK(r.status == 0);
    CHECK(pwl::load_system(r.out).num_behaviors() == 2);

    r = run_cli("gen random --seed 9 --states 5 --actions 2 --behaviors 3");
    CHECK(r.status == 0);
    CHECK(pwl::load_system(r.out).num_states() == 5);
    CHECK(run_cli("gen random --seed 9 --states 5 --actions 2 --behaviors 3").out == r.out);

    const std::string cnf_out = scratch().dir + "/gen.dimacs";
    r = run_cli("gen cnf --seed 4 --vars 4 --clauses 3 --cnf-out " + cnf_out);
    CHECK(r.status == 0);
    CHECK_NOTHROW(pwl::load_system(r.out));
    const pwl::Cnf3 phi = pwl::load_dimacs(pwl::read_text_file(cnf_out));
    CHECK(phi.num_vars == 4);
    CHECK(phi.clauses.size() == 3);
    CHECK(r.out == pwl::system_to_json(pwl::system_from_cnf(phi)));
}

TEST_CASE("extended commands accept evolving-behavior files") {
    auto r = run_cli("ext-verify --system " + scratch().ext + " --plan " + scratch().plan + " --horizon 3");
    CHECK(r.status == 0);
    CHECK(nlohmann::json::parse(r.out)["satisfactory"] == true);

    CHECK(run_cli("ext-verify --system " + scratch().ext + " --plan " + scratch().halfplan + " --horizon 2").status ==
          1);

    r = run_cli("ext-synthesize --system " + scratch().ext + " --horizon 3");
    CHECK(r.status == 0);
    const pwl::PwlSystem intro = pwl::gen_intro_example();
    CHECK(pwl::load_plan(intro.state_names, intro.action_names, r.out).size() == 5);
    CHECK(run_cli("ext-synthesize --system " + scratch().ext + " --horizon 2").status == 1);
}

TEST_CASE("multi agent commands") {
    auto r = run_cli("ma-verify --system " + scratch().ma + " --plans " + scratch().maplans + " --horizon 2");
    CHECK(r.status == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["satisfactory"] == true);
    CHECK(j["reports"].size() == 2);

    r = run_cli("ma-verify --system " + scratch().mastall + " --plans " + scratch().mastallplans + " --horizon 2");
    CHECK(r.status == 1);
    j = nlohmann::json::parse(r.out);
    CHECK(j["satisfactory"] == false);

    r = run_cli("reduce-goals --system " + scratch().ma);
    CHECK(r.status == 0);
    const pwl::MultiAgentSystem rw = pwl::load_ma(r.out);
    const auto instances = testutil::ma_instances();
    CHECK(rw.agents[0].num_states() == instances[0].ms.agents[0].num_states() * 3 + 1);
    CHECK(rw.num_actions() == instances[0].ms.num_actions() + 2);
}

TEST_CASE("bench reports one point per behavior count") {
    auto r = run_cli("bench --behaviors 2,4 --states 6 --horizon 4 --seed 3");
    CHECK(r.status == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    REQUIRE(j["points"].size() == 2);
    CHECK(j["points"][0]["behaviors"] == 2);
    CHECK(j["points"][0]["step_applications"] == 2 * 4);
    CHECK(j["points"][1]["step_applications"] == 4 * 4);
    CHECK(j["points"][0]["timing"]["iterations"].get<int>() >= 1);

    CHECK(run_cli("bench --behaviors 0").status == 2);
    CHECK(run_cli("bench --behaviors x").status == 2);
}

TEST_CASE("the out flag mirrors stdout bytes") {
    const std::string out_path = scratch().dir + "/mirror.json";
    auto r = run_cli("verify --system " + scratch().sys + " --plan " + scratch().plan + " --out " + out_path);
    CHECK(r.status == 0);
    CHECK(pwl::read_text_file(out_path) == r.out);

    const std::string plan_out = scratch().dir + "/plan_out.json";
    r = run_cli("synthesize --system " + scratch().sys + " --horizon 3 --out " + plan_out);
    CHECK(r.status == 0);
    CHECK(pwl::read_text_file(plan_out) == r.out);
}

TEST_CASE("repeated invocations are byte-identical") {
    const std::vector<std::string> cmds = {
        "verify --system " + scratch().sys + " --plan " + scratch().plan,
        "synthesize --system " + scratch().sys + " --horizon 3",
        "shrink --system " + scratch().sys + " --plan " + scratch().plan,
        "from-cnf --cnf " + scratch().cnf,
        "reduce-goals --system " + scratch().ma,
    };
    for (const auto &cmd : cmds) {
        CAPTURE(cmd);
        CHECK(run_cli(cmd).out == run_cli(cmd).out);
    }
}
