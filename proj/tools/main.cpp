#include <cstdint>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pwl/bench.hpp"
#include "pwl/domains.hpp"
#include "pwl/errors.hpp"
#include "pwl/extended.hpp"
#include "pwl/io.hpp"
#include "pwl/multiagent.hpp"
#include "pwl/plan.hpp"
#include "pwl/reductions.hpp"
#include "pwl/shrinker.hpp"
#include "pwl/synthesizer.hpp"
#include "pwl/system.hpp"
#include "pwl/verifier.hpp"

namespace {

// Primary output always goes to stdout; --out mirrors the same bytes.
void emit(const std::string &text, const std::string &out_path) {
    std::cout << text;
    if (!out_path.empty()) pwl::write_text_file(out_path, text);
}

std::string dump(const nlohmann::json &j) { return j.dump(2) + "\n"; }

pwl::BehaviorId behavior_by_name(const pwl::PwlSystem &sys, const std::string &name) {
    for (std::size_t i = 0; i < sys.behaviors.size(); ++i) {
        if (sys.behaviors[i].name == name) return static_cast<pwl::BehaviorId>(i);
    }
    throw pwl::ValidationError("unknown behavior: " + name);
}

std::vector<std::size_t> parse_size_list(const std::string &text) {
    std::vector<std::size_t> out;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        std::size_t pos = 0;
        unsigned long long value = 0;
        try {
            value = std::stoull(tok, &pos);
        } catch (const std::exception &) {
            throw pwl::ParseError("invalid count: " + tok);
        }
        if (pos != tok.size() || value == 0) throw pwl::ParseError("invalid count: " + tok);
        out.push_back(static_cast<std::size_t>(value));
    }
    if (out.empty()) throw pwl::ParseError("empty count list");
    return out;
}

struct ValidateOpts {
    std::string system;
    std::string plan;
    std::string format = "json";
};

int run_validate(const ValidateOpts &o) {
    const std::string text = pwl::read_text_file(o.system);
    nlohmann::json out;
    pwl::SystemKind kind = pwl::detect_system_kind(text);
    if (kind == pwl::SystemKind::Basic) {
        const pwl::PwlSystem sys = pwl::load_system(text);
        out["kind"] = "basic";
        out["states"] = sys.num_states();
        out["actions"] = sys.num_actions();
        out["behaviors"] = sys.num_behaviors();
        if (!o.plan.empty()) {
            const pwl::PlanTable p = pwl::load_plan(sys.state_names, sys.action_names, pwl::read_text_file(o.plan));
            pwl::validate_plan(sys, p);
            out["plan_entries"] = p.size();
            out["plan_horizon"] = p.horizon;
        }
    } else if (kind == pwl::SystemKind::Extended) {
        const pwl::ExtendedSystem es = pwl::load_extended(text);
        out["kind"] = "extended";
        out["states"] = es.num_states();
        out["actions"] = es.num_actions();
        out["behaviors"] = es.num_behaviors();
        out["initial_candidates"] = es.initial_candidates.size();
        if (!o.plan.empty()) {
            const pwl::PlanTable p = pwl::load_plan(es.state_names, es.action_names, pwl::read_text_file(o.plan));
            pwl::validate_plan_shape(es.num_states(), es.num_actions(), es.initial, p);
            out["plan_entries"] = p.size();
            out["plan_horizon"] = p.horizon;
        }
    } else {
        const pwl::MultiAgentSystem ms = pwl::load_ma(text);
        out["kind"] = "multi_agent";
        out["agent1_states"] = ms.agents[0].num_states();
        out["agent2_states"] = ms.agents[1].num_states();
        out["actions"] = ms.num_actions();
        out["behaviors"] = ms.num_behaviors();
        if (!o.plan.empty()) {
            const pwl::MultiAgentPlan mp = pwl::load_ma_plan(ms, pwl::read_text_file(o.plan));
            out["agent1_plans"] = mp.agents[0].plans.size();
            out["agent2_plans"] = mp.agents[1].plans.size();
        }
    }
    out["valid"] = true;
    emit(dump(out), "");
    return 0;
}

struct VerifyOpts {
    std::string system;
    std::string plan;
    std::string out;
    std::size_t horizon = 0;
    bool horizon_set = false;
    double threshold = 1.0;
    std::string format = "json";
};

int run_verify(const VerifyOpts &o) {
    const pwl::PwlSystem sys = pwl::load_system(pwl::read_text_file(o.system));
    const pwl::PlanTable p = pwl::load_plan(sys.state_names, sys.action_names, pwl::read_text_file(o.plan));
    const std::size_t horizon = o.horizon_set ? o.horizon : p.horizon;
    const pwl::Verdict v = pwl::verify(sys, p, horizon, o.threshold);
    emit(pwl::verdict_to_json(sys, v), o.out);
    return v.satisfactory ? 0 : 1;
}

struct SimulateOpts {
    std::string system;
    std::string plan;
    std::string behavior;
    std::string out;
    std::size_t horizon = 0;
    bool horizon_set = false;
    std::string format = "json";
};

int run_simulate(const SimulateOpts &o) {
    const pwl::PwlSystem sys = pwl::load_system(pwl::read_text_file(o.system));
    const pwl::PlanTable p = pwl::load_plan(sys.state_names, sys.action_names, pwl::read_text_file(o.plan));
    pwl::validate_plan(sys, p);
    const pwl::BehaviorId b = behavior_by_name(sys, o.behavior);
    const std::size_t horizon = o.horizon_set ? o.horizon : p.horizon;
    const pwl::Trace t = pwl::simulate(sys, p, b, horizon);
    emit(pwl::trace_to_json(sys.state_names, sys.action_names, sys.behaviors[static_cast<std::size_t>(b)].name, t),
         o.out);
    return t.outcome == pwl::Outcome::GoalReached ? 0 : 1;
}

struct ShrinkOpts {
    std::string system;
    std::string plan;
    std::string out;
    std::string format = "json";
};

int run_shrink(const ShrinkOpts &o) {
    const pwl::PwlSystem sys = pwl::load_system(pwl::read_text_file(o.system));
    const pwl::PlanTable p = pwl::load_plan(sys.state_names, sys.action_names, pwl::read_text_file(o.plan));
    const pwl::PlanTable shrunk = pwl::shrink(sys, p);
    emit(pwl::plan_to_json(sys.state_names, sys.action_names, shrunk), o.out);
    return 0;
}

struct SynthesizeOpts {
    std::string system;
    std::string out;
    std::size_t horizon = 0;
    bool horizon_set = false;
    std::string format = "json";
};

int run_synthesize(const SynthesizeOpts &o) {
    const pwl::PwlSystem sys = pwl::load_system(pwl::read_text_file(o.system));
    const std::size_t horizon = o.horizon_set ? o.horizon : pwl::default_horizon(sys);
    pwl::SynthesisStats stats;
    const auto plan = pwl::synthesize(sys, horizon, &stats);
    std::cerr << "explored nodes: " << stats.explored_nodes << "\n";
    if (!plan) {
        std::cerr << "no plan within horizon " << horizon << "\n";
        return 1;
    }
    emit(pwl::plan_to_json(sys.state_names, sys.action_names, *plan), o.out);
    return 0;
}

struct FromCnfOpts {
    std::string cnf;
    std::string out;
    std::string format = "json";
};

int run_from_cnf(const FromCnfOpts &o) {
    const pwl::Cnf3 phi = pwl::load_dimacs(pwl::read_text_file(o.cnf));
    emit(pwl::system_to_json(pwl::system_from_cnf(phi)), o.out);
    return 0;
}

struct PlanFromAssignmentOpts {
    std::string cnf;
    std::string assignment;
    std::string out;
    std::string format = "json";
};

int run_plan_from_assignment(const PlanFromAssignmentOpts &o) {
    const pwl::Cnf3 phi = pwl::load_dimacs(pwl::read_text_file(o.cnf));
    const pwl::Assignment s = pwl::parse_assignment(o.assignment);
    const pwl::PwlSystem sys = pwl::system_from_cnf(phi);
    pwl::PlanTable p;
    try {
        p = pwl::plan_from_assignment(phi, s, sys);
    } catch (const pwl::RestrictionUnsatisfied &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    emit(pwl::plan_to_json(sys.state_names, sys.action_names, p), o.out);
    return 0;
}

struct AssignmentFromPlanOpts {
    std::string cnf;
    std::string plan;
    std::string out;
    std::string format = "json";
};

int run_assignment_from_plan(const AssignmentFromPlanOpts &o) {
    const pwl::Cnf3 phi = pwl::load_dimacs(pwl::read_text_file(o.cnf));
    const pwl::PwlSystem sys = pwl::system_from_cnf(phi);
    const pwl::PlanTable p = pwl::load_plan(sys.state_names, sys.action_names, pwl::read_text_file(o.plan));
    pwl::Assignment s;
    try {
        s = pwl::assignment_from_plan(phi, p, sys);
    } catch (const pwl::NotSatisfactory &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    emit(pwl::assignment_to_json(s), o.out);
    return 0;
}

struct GenIntroOpts {
    std::string out;
    std::string format = "json";
};

struct GenTransportOpts {
    std::string graph;
    std::string out;
    std::string format = "json";
};

struct GenRandomOpts {
    std::uint64_t seed = 0;
    std::size_t states = 0;
    std::size_t actions = 0;
    std::size_t behaviors = 0;
    double goal_density = 0.25;
    std::string out;
    std::string format = "json";
};

struct GenCnfOpts {
    std::uint64_t seed = 0;
    int vars = 0;
    int clauses = 0;
    std::string out;
    std::string cnf_out;
    std::string format = "json";
};

struct ExtVerifyOpts {
    std::string system;
    std::string plan;
    std::string out;
    std::size_t horizon = 0;
    double threshold = 1.0;
    std::string format = "json";
};

int run_ext_verify(const ExtVerifyOpts &o) {
    const pwl::ExtendedSystem es = pwl::load_extended(pwl::read_text_file(o.system));
    const pwl::PlanTable p = pwl::load_plan(es.state_names, es.action_names, pwl::read_text_file(o.plan));
    const pwl::Verdict v = pwl::ext_verify(es, p, o.horizon, o.threshold);
    emit(pwl::ext_verdict_to_json(es, v), o.out);
    return v.satisfactory ? 0 : 1;
}

struct ExtSynthesizeOpts {
    std::string system;
    std::string out;
    std::size_t horizon = 0;
    std::string format = "json";
};

int run_ext_synthesize(const ExtSynthesizeOpts &o) {
    const pwl::ExtendedSystem es = pwl::load_extended(pwl::read_text_file(o.system));
    pwl::SynthesisStats stats;
    const auto plan = pwl::ext_synthesize(es, o.horizon, &stats);
    std::cerr << "explored nodes: " << stats.explored_nodes << "\n";
    if (!plan) {
        std::cerr << "no plan within horizon " << o.horizon << "\n";
        return 1;
    }
    emit(pwl::plan_to_json(es.state_names, es.action_names, *plan), o.out);
    return 0;
}

struct MaVerifyOpts {
    std::string system;
    std::string plans;
    std::string out;
    std::size_t horizon = 0;
    std::string format = "json";
};

int run_ma_verify(const MaVerifyOpts &o) {
    const pwl::MultiAgentSystem ms = pwl::load_ma(pwl::read_text_file(o.system));
    const pwl::MultiAgentPlan mp = pwl::load_ma_plan(ms, pwl::read_text_file(o.plans));
    const pwl::MaVerdict v = pwl::ma_verify(ms, mp, o.horizon);
    emit(pwl::ma_verdict_to_json(v), o.out);
    return v.satisfactory ? 0 : 1;
}

struct ReduceGoalsOpts {
    std::string system;
    std::string out;
    std::string format = "json";
};

int run_reduce_goals(const ReduceGoalsOpts &o) {
    const pwl::MultiAgentSystem ms = pwl::load_ma(pwl::read_text_file(o.system));
    emit(pwl::ma_to_json(pwl::reduce_goals(ms)), o.out);
    return 0;
}

struct BenchOpts {
    std::uint64_t seed = 1;
    std::size_t states = 64;
    std::size_t horizon = 32;
    std::string behaviors = "16,32,64,128,256";
    std::string out;
    std::string format = "json";
};

int run_bench(const BenchOpts &o) {
    const pwl::BenchReport r = pwl::run_scaling_bench(parse_size_list(o.behaviors), o.states, o.horizon, o.seed);
    nlohmann::json points = nlohmann::json::array();
    for (const auto &pt : r.points) {
        nlohmann::json timing;
        timing["iterations"] = pt.iterations;
        timing["seconds_per_verify"] = pt.seconds_per_verify;
        nlohmann::json pj;
        pj["behaviors"] = pt.num_behaviors;
        pj["plan_entries"] = pt.plan_entries;
        pj["step_applications"] = pt.step_applications;
        pj["timing"] = std::move(timing);
        points.push_back(std::move(pj));
    }
    nlohmann::json out;
    out["num_states"] = r.num_states;
    out["num_actions"] = r.num_actions;
    out["horizon"] = r.horizon;
    out["seed"] = r.seed;
    out["points"] = std::move(points);
    emit(dump(out), o.out);
    return 0;
}

void add_format(CLI::App *sub, std::string &format) {
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"json"}));
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"modeling, verification, shrinking, and synthesis for plans that learn the environment"};
    app.require_subcommand(1);
    int rc = 0;

    {
        auto o = std::make_shared<ValidateOpts>();
        auto *sub = app.add_subcommand("validate", "load a system file and report its shape");
        sub->add_option("--system", o->system, "system file (kind auto-detected)")->required();
        sub->add_option("--plan", o->plan, "plan file to check against the system");
        add_format(sub, o->format);
        sub->callback([o, &rc] { rc = run_validate(*o); });
    }
    {
        auto o = std::make_shared<VerifyOpts>();
        auto *sub = app.add_subcommand("verify", "check a plan against every behavior");
        sub->add_option("--system", o->system, "system file")->required();
        sub->add_option("--plan", o->plan, "plan file")->required();
        auto *h = sub->add_option("--horizon", o->horizon, "step bound (default: plan horizon)");
        sub->add_option("--threshold", o->threshold, "required fraction of behaviors reaching the goal")->capture_default_str();
        sub->add_option("--out", o->out, "also write the verdict to this file");
        add_format(sub, o->format);
        sub->callback([o, h, &rc] {
            o->horizon_set = h->count() > 0;
            rc = run_verify(*o);
        });
    }
    {
        auto o = std::make_shared<SimulateOpts>();
        auto *sub = app.add_subcommand("simulate", "run a plan under one named behavior");
        sub->add_option("--system", o->system, "system file")->required();
        sub->add_option("--plan", o->plan, "plan file")->required();
        sub->add_option("--behavior", o->behavior, "behavior name")->required();
        auto *h = sub->add_option("--horizon", o->horizon, "step bound (default: plan horizon)");
        sub->add_option("--out", o->out, "also write the trace to this file");
        add_format(sub, o->format);
        sub->callback([o, h, &rc] {
            o->horizon_set = h->count() > 0;
            rc = run_simulate(*o);
        });
    }
    {
        auto o = std::make_shared<ShrinkOpts>();
        auto *sub = app.add_subcommand("shrink", "cut a satisfactory plan down to the branch-length bound");
        sub->add_option("--system", o->system, "system file")->required();
        sub->add_option("--plan", o->plan, "plan file (must verify at threshold 1)")->required();
        sub->add_option("--out", o->out, "also write the shrunk plan to this file");
        add_format(sub, o->format);
        sub->callback([o, &rc] { rc = run_shrink(*o); });
    }
    {
        auto o = std::make_shared<SynthesizeOpts>();
        auto *sub = app.add_subcommand("synthesize", "search for a plan that reaches the goal under every behavior");
        sub->add_option("--system", o->system, "system file")->required();
        auto *h = sub->add_option("--horizon", o->horizon, "branch-length bound (default: behaviors * states)");
        sub->add_option("--out", o->out, "also write the plan to this file");
        add_format(sub, o->format);
        sub->callback([o, h, &rc] {
            o->horizon_set = h->count() > 0;
            rc = run_synthesize(*o);
        });
    }
    {
        auto o = std::make_shared<FromCnfOpts>();
        auto *sub = app.add_subcommand("from-cnf", "encode a DIMACS 3-CNF as a plan-existence system");
        sub->add_option("--cnf", o->cnf, "DIMACS file (three distinct variables per clause)")->required();
        sub->add_option("--out", o->out, "also write the system to this file");
        add_format(sub, o->format);
        sub->callback([o, &rc] { rc = run_from_cnf(*o); });
    }
    {
        auto o = std::make_shared<PlanFromAssignmentOpts>();
        auto *sub = app.add_subcommand("plan-from-assignment", "build the straight-line plan for a satisfying assignment");
        sub->add_option("--cnf", o->cnf, "DIMACS file")->required();
        sub->add_option("--assignment", o->assignment, "truth values, e.g. 101 or 1,0,1")->required();
        sub->add_option("--out", o->out, "also write the plan to this file");
        add_format(sub, o->format);
        sub->callback([o, &rc] { rc = run_plan_from_assignment(*o); });
    }
    {
        auto o = std::make_shared<AssignmentFromPlanOpts>();
        auto *sub = app.add_subcommand("assignment-from-plan", "read a satisfying assignment off a satisfactory plan");
        sub->add_option("--cnf", o->cnf, "DIMACS file")->required();
        sub->add_option("--plan", o->plan, "plan file for the encoded system")->required();
        sub->add_option("--out", o->out, "also write the assignment to this file");
        add_format(sub, o->format);
        sub->callback([o, &rc] { rc = run_assignment_from_plan(*o); });
    }
    {
        auto *gen = app.add_subcommand("gen", "generate example and random systems");
        gen->require_subcommand(1);
        {
            auto o = std::make_shared<GenIntroOpts>();
            auto *sub = gen->add_subcommand("intro", "two-route sensing example");
            sub->add_option("--out", o->out, "also write the system to this file");
            add_format(sub, o->format);
            sub->callback([o, &rc] {
                emit(pwl::system_to_json(pwl::gen_intro_example()), o->out);
                rc = 0;
            });
        }
        {
            auto o = std::make_shared<GenTransportOpts>();
            auto *sub = gen->add_subcommand("transport", "route network with uncertain endpoints");
            sub->add_option("--graph", o->graph, "transport graph file")->required();
            sub->add_option("--out", o->out, "also write the system to this file");
            add_format(sub, o->format);
            sub->callback([o, &rc] {
                const pwl::TransportGraph g = pwl::load_transport_graph(pwl::read_text_file(o->graph));
                emit(pwl::system_to_json(pwl::gen_transport(g)), o->out);
                rc = 0;
            });
        }
        {
            auto o = std::make_shared<GenRandomOpts>();
            auto *sub = gen->add_subcommand("random", "seeded random system");
            sub->add_option("--seed", o->seed, "random seed")->capture_default_str();
            sub->add_option("--states", o->states, "number of states")->required();
            sub->add_option("--actions", o->actions, "number of actions")->required();
            sub->add_option("--behaviors", o->behaviors, "number of behaviors")->required();
            sub->add_option("--goal-density", o->goal_density, "per-state goal probability")->capture_default_str();
            sub->add_option("--out", o->out, "also write the system to this file");
            add_format(sub, o->format);
            sub->callback([o, &rc] {
                emit(pwl::system_to_json(
                         pwl::gen_random(o->seed, o->states, o->actions, o->behaviors, o->goal_density)),
                     o->out);
                rc = 0;
            });
        }
        {
            auto o = std::make_shared<GenCnfOpts>();
            auto *sub = gen->add_subcommand("cnf", "system encoding a seeded random 3-CNF");
            sub->add_option("--seed", o->seed, "random seed")->capture_default_str();
            sub->add_option("--vars", o->vars, "number of variables")->required();
            sub->add_option("--clauses", o->clauses, "number of clauses")->required();
            sub->add_option("--out", o->out, "also write the system to this file");
            sub->add_option("--cnf-out", o->cnf_out, "also write the formula in DIMACS form to this file");
            add_format(sub, o->format);
            sub->callback([o, &rc] {
                const pwl::Cnf3 phi = pwl::random_cnf(o->seed, o->vars, o->clauses);
                if (!o->cnf_out.empty()) pwl::write_text_file(o->cnf_out, pwl::dimacs_from_cnf(phi));
                emit(pwl::system_to_json(pwl::system_from_cnf(phi)), o->out);
                rc = 0;
            });
        }
    }
    {
        auto o = std::make_shared<ExtVerifyOpts>();
        auto *sub = app.add_subcommand("ext-verify", "check a plan against every initial behavior candidate");
        sub->add_option("--system", o->system, "extended system file")->required();
        sub->add_option("--plan", o->plan, "plan file")->required();
        sub->add_option("--horizon", o->horizon, "step bound")->required();
        sub->add_option("--threshold", o->threshold, "required fraction of candidates reaching the goal")->capture_default_str();
        sub->add_option("--out", o->out, "also write the verdict to this file");
        add_format(sub, o->format);
        sub->callback([o, &rc] { rc = run_ext_verify(*o); });
    }
    {
        auto o = std::make_shared<ExtSynthesizeOpts>();
        auto *sub = app.add_subcommand("ext-synthesize", "search for a plan against evolving behaviors");
        sub->add_option("--system", o->system, "extended system file")->required();
        sub->add_option("--horizon", o->horizon, "branch-length bound")->required();
        sub->add_option("--out", o->out, "also write the plan to this file");
        add_format(sub, o->format);
        sub->callback([o, &rc] { rc = run_ext_synthesize(*o); });
    }
    {
        auto o = std::make_shared<MaVerifyOpts>();
        auto *sub = app.add_subcommand("ma-verify", "check per-goal plan choices against all opponent plans");
        sub->add_option("--system", o->system, "multi-agent system file")->required();
        sub->add_option("--plans", o->plans, "plan-set file (plans per agent)")->required();
        sub->add_option("--horizon", o->horizon, "joint step bound")->required();
        sub->add_option("--out", o->out, "also write the verdict to this file");
        add_format(sub, o->format);
        sub->callback([o, &rc] { rc = run_ma_verify(*o); });
    }
    {
        auto o = std::make_shared<ReduceGoalsOpts>();
        auto *sub = app.add_subcommand("reduce-goals", "rewrite a multi-goal system into a single-goal one");
        sub->add_option("--system", o->system, "multi-agent system file")->required();
        sub->add_option("--out", o->out, "also write the system to this file");
        add_format(sub, o->format);
        sub->callback([o, &rc] { rc = run_reduce_goals(*o); });
    }
    {
        auto o = std::make_shared<BenchOpts>();
        auto *sub = app.add_subcommand("bench", "time verification against a growing behavior count");
        sub->add_option("--seed", o->seed, "random seed")->capture_default_str();
        sub->add_option("--states", o->states, "number of states")->capture_default_str();
        sub->add_option("--horizon", o->horizon, "plan horizon")->capture_default_str();
        sub->add_option("--behaviors", o->behaviors, "comma-separated behavior counts")->capture_default_str();
        sub->add_option("--out", o->out, "also write the report to this file");
        add_format(sub, o->format);
        sub->callback([o, &rc] { rc = run_bench(*o); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
