#include <algorithm>
#include <string>
#include <vector>

#include "doctest.h"
#include "ma_instances.hpp"
#include "pwl/errors.hpp"
#include "pwl/multiagent.hpp"

using pwl::HistoryKey;
using pwl::JointTrace;
using pwl::MaVerdict;
using pwl::MultiAgentPlan;
using pwl::MultiAgentSystem;
using pwl::PlanTable;

namespace {

const testutil::MaInstance &instance(const std::vector<testutil::MaInstance> &all, const std::string &name) {
    auto it = std::find_if(all.begin(), all.end(), [&](const testutil::MaInstance &i) { return i.name == name; });
    REQUIRE(it != all.end());
    return *it;
}

// Depth-2 plan for the crossing agents: play `first` from the start state,
// then `second` on both observations.
PlanTable crossing_plan(int first, int second) {
    PlanTable p;
    p.horizon = 2;
    p.entries.emplace(HistoryKey(0), first);
    p.entries.emplace(HistoryKey(0).extended(first, 0), second);
    p.entries.emplace(HistoryKey(0).extended(first, 1), second);
    return p;
}

}  // namespace

TEST_CASE("joint simulation records both agents and the behavior id") {
    const auto all = testutil::ma_instances();
    const MultiAgentSystem &ms = instance(all, "blocked_crossing").ms;

    // Both rush: the collision jams agent 2 for one step.
    JointTrace jt = pwl::joint_simulate(ms, crossing_plan(0, 0), crossing_plan(0, 0), 0, 0, 0, 2);
    CHECK(jt.end == JointTrace::End::Completed);
    REQUIRE(jt.steps.size() == 2);
    CHECK(jt.steps[0] == std::array<int, 5>{0, 0, 0, 0, 0});
    CHECK(jt.steps[1] == std::array<int, 5>{1, 0, 1, 0, 0});
    CHECK(jt.final == std::array<int, 3>{1, 1, 1});
    CHECK(jt.first_visit[0][0] == 1);
    CHECK(jt.first_visit[1][0] == 2);  // delayed by the collision

    // Agent 2 waits one step and crosses unopposed.
    jt = pwl::joint_simulate(ms, crossing_plan(0, 1), crossing_plan(1, 0), 0, 0, 0, 2);
    CHECK(jt.first_visit[0][0] == 1);
    CHECK(jt.first_visit[1][0] == 2);
    CHECK(jt.final == std::array<int, 3>{1, 1, 0});  // no jam
}

TEST_CASE("goal visits count the initial state") {
    const auto all = testutil::ma_instances();
    const MultiAgentSystem &ms = instance(all, "goals_at_start").ms;
    PlanTable empty;
    empty.horizon = 0;

    JointTrace jt = pwl::joint_simulate(ms, empty, empty, 0, 0, 0, 0);
    CHECK(jt.end == JointTrace::End::Completed);
    CHECK(jt.steps.empty());
    CHECK(jt.first_visit[0][0] == 0);
    CHECK(jt.first_visit[1][0] == 0);
}

TEST_CASE("a missing entry names the stuck agent and its own history") {
    const auto all = testutil::ma_instances();
    const MultiAgentSystem &ms = instance(all, "blocked_crossing").ms;

    PlanTable p1 = crossing_plan(0, 0);
    PlanTable p2;
    p2.horizon = 2;
    p2.entries.emplace(HistoryKey(0), 0);  // nothing for step 2

    JointTrace jt = pwl::joint_simulate(ms, p1, p2, 0, 0, 0, 2);
    CHECK(jt.end == JointTrace::End::UndefinedEntry);
    CHECK(jt.undefined_agent == 1);
    REQUIRE(jt.undefined_history.has_value());
    // Agent 2 was jammed: it observed itself still at w2 after going.
    CHECK(*jt.undefined_history == HistoryKey(0).extended(0, 0));
    CHECK(jt.steps.size() == 1);

    // When both lack an entry, agent 1 is reported.
    PlanTable empty;
    empty.horizon = 2;
    jt = pwl::joint_simulate(ms, empty, empty, 0, 0, 0, 2);
    CHECK(jt.end == JointTrace::End::UndefinedEntry);
    CHECK(jt.undefined_agent == 0);
    CHECK(*jt.undefined_history == HistoryKey(0));
}

TEST_CASE("plans act on their own observations only") {
    const auto all = testutil::ma_instances();
    const MultiAgentSystem &ms = instance(all, "blocked_crossing").ms;

    // Swapping the opponent's plan must not change agent 1's actions as
    // long as agent 1 observes the same own-state prefix.
    const PlanTable p1 = crossing_plan(0, 0);
    JointTrace a = pwl::joint_simulate(ms, p1, crossing_plan(0, 0), 0, 0, 0, 2);
    JointTrace b = pwl::joint_simulate(ms, p1, crossing_plan(1, 1), 0, 0, 0, 2);
    const std::size_t len = std::min(a.steps.size(), b.steps.size());
    for (std::size_t k = 0; k < len; ++k) {
        // Equal own-state prefixes force equal own actions.
        if (a.steps[k][0] != b.steps[k][0]) break;
        CHECK(a.steps[k][3] == b.steps[k][3]);
    }
}

TEST_CASE("plan-set verification picks witnesses and reports counterexamples") {
    const auto all = testutil::ma_instances();
    const MultiAgentSystem &ms = instance(all, "blocked_crossing").ms;

    MultiAgentPlan mp;
    mp.agents[0].names = {"rush1", "wait1"};
    mp.agents[0].plans = {crossing_plan(0, 0), crossing_plan(1, 0)};
    mp.agents[1].names = {"rush2", "wait2"};
    mp.agents[1].plans = {crossing_plan(0, 0), crossing_plan(1, 0)};

    MaVerdict v = pwl::ma_verify(ms, mp, 1);
    REQUIRE(v.reports.size() == 2);

    // Agent 1 reaches m1 in one step with the rush plan whatever agent 2
    // does; agent 2 is jammed whenever agent 1's set includes rushing.
    CHECK(v.reports[0].agent == 0);
    CHECK(v.reports[0].goal == "g1");
    CHECK(v.reports[0].satisfied);
    CHECK(v.reports[0].plan == "rush1");

    CHECK(v.reports[1].agent == 1);
    CHECK(v.reports[1].goal == "g2");
    CHECK_FALSE(v.reports[1].satisfied);
    REQUIRE(v.reports[1].counterexample.has_value());
    CHECK(v.reports[1].counterexample->candidate_plan == "rush2");
    CHECK(v.reports[1].counterexample->opponent_plan == "rush1");
    CHECK(v.reports[1].counterexample->i1 == "w1");
    CHECK(v.reports[1].counterexample->i2 == "w2");
    CHECK(v.reports[1].counterexample->b0 == "ok");
    CHECK_FALSE(v.satisfactory);

    // At horizon 2 the jam only delays agent 2; everything passes.
    MaVerdict wide = pwl::ma_verify(ms, mp, 2);
    CHECK(wide.reports[1].satisfied);
    CHECK(wide.satisfactory);

    // Satisfaction is monotone in the horizon.
    for (std::size_t i = 0; i < v.reports.size(); ++i) {
        if (v.reports[i].satisfied) CHECK(wide.reports[i].satisfied);
    }
}

TEST_CASE("designations restrict the candidate set") {
    const auto all = testutil::ma_instances();
    const MultiAgentSystem &ms = instance(all, "blocked_crossing").ms;

    MultiAgentPlan mp;
    mp.agents[0].names = {"rush1", "wait1"};
    mp.agents[0].plans = {crossing_plan(0, 0), crossing_plan(1, 1)};
    mp.agents[1].names = {"rush2"};
    mp.agents[1].plans = {crossing_plan(0, 0)};
    mp.agents[0].designations["g1"] = "wait1";

    MaVerdict v = pwl::ma_verify(ms, mp, 1);
    CHECK_FALSE(v.reports[0].satisfied);
    REQUIRE(v.reports[0].counterexample.has_value());
    CHECK(v.reports[0].counterexample->candidate_plan == "wait1");

    mp.agents[0].designations["g1"] = "rush1";
    v = pwl::ma_verify(ms, mp, 1);
    CHECK(v.reports[0].satisfied);
    CHECK(v.reports[0].plan == "rush1");
}

TEST_CASE("plan-set validation rejects malformed input") {
    const auto all = testutil::ma_instances();
    const MultiAgentSystem &ms = instance(all, "blocked_crossing").ms;

    MultiAgentPlan mp;
    mp.agents[0].names = {"p"};
    mp.agents[0].plans = {crossing_plan(0, 0)};
    mp.agents[1].names = {"q"};
    mp.agents[1].plans = {crossing_plan(0, 0)};

    SUBCASE("empty plan set") {
        mp.agents[1].plans.clear();
        mp.agents[1].names.clear();
        CHECK_THROWS_AS(pwl::ma_verify(ms, mp, 1), pwl::ValidationError);
    }
    SUBCASE("duplicate plan names") {
        mp.agents[0].names = {"p", "p"};
        mp.agents[0].plans = {crossing_plan(0, 0), crossing_plan(1, 1)};
        CHECK_THROWS_AS(pwl::ma_verify(ms, mp, 1), pwl::ValidationError);
    }
    SUBCASE("unknown designated goal") {
        mp.agents[0].designations["nope"] = "p";
        CHECK_THROWS_AS(pwl::ma_verify(ms, mp, 1), pwl::ValidationError);
    }
    SUBCASE("unknown designated plan") {
        mp.agents[0].designations["g1"] = "nope";
        CHECK_THROWS_AS(pwl::ma_verify(ms, mp, 1), pwl::ValidationError);
    }
    SUBCASE("history outside the agent state set") {
        PlanTable bad;
        bad.horizon = 1;
        bad.entries.emplace(HistoryKey(7), 0);
        mp.agents[0].plans = {bad};
        CHECK_THROWS_AS(pwl::ma_verify(ms, mp, 1), pwl::ValidationError);
    }
}

TEST_CASE("the goal rewrite produces the documented layout") {
    const auto all = testutil::ma_instances();
    const MultiAgentSystem &ms = instance(all, "independent_drift").ms;
    MultiAgentSystem red = pwl::reduce_goals(ms);

    CHECK(red.action_names == std::vector<std::string>{"m", "observe_goal_1", "observe_goal_2"});
    CHECK(red.agents[0].state_names ==
          std::vector<std::string>{"u0@start", "u0@obs_ga", "u0@goal", "u1@start", "u1@obs_ga", "u1@goal", "@fail"});
    CHECK(red.behavior_names == std::vector<std::string>{"w@ga@gb"});
    CHECK(red.initial_behaviors == std::vector<pwl::BehaviorId>{0});
    CHECK(red.agents[0].initials == std::vector<pwl::StateId>{0});

    REQUIRE(red.agents[0].goals.size() == 1);
    CHECK(red.agents[0].goals[0].name == "goal_1");
    CHECK(red.agents[0].goals[0].states == std::vector<pwl::StateId>{2, 5});
    CHECK(red.agents[1].goals[0].name == "goal_2");

    // |Q'| = |Q| * (n + 2) + 1 and |B'| = |B| * |G1| * |G2|.
    for (int ag = 0; ag < 2; ++ag) {
        const std::size_t n = ms.agents[ag].goals.size();
        CHECK(red.agents[ag].num_states() == ms.agents[ag].num_states() * (n + 2) + 1);
    }
    CHECK(red.num_behaviors() ==
          ms.num_behaviors() * ms.agents[0].goals.size() * ms.agents[1].goals.size());
    CHECK(red.num_actions() == ms.num_actions() + 2);
}

TEST_CASE("the goal rewrite crosses behaviors with both goal families") {
    const auto all = testutil::ma_instances();
    const MultiAgentSystem &ms = instance(all, "hidden_branch").ms;
    MultiAgentSystem red = pwl::reduce_goals(ms);
    CHECK(red.behavior_names ==
          std::vector<std::string>{"L@ga@gv", "L@ga@gw", "R@ga@gv", "R@ga@gw"});
    CHECK(red.initial_behaviors.size() == 4);
    CHECK(red.agents[1].state_names ==
          std::vector<std::string>{"v0@start", "v0@obs_gv", "v0@obs_gw", "v0@goal", "@fail"});
}

TEST_CASE("rewritten dynamics follow the observe-then-pursue protocol") {
    const auto all = testutil::ma_instances();
    const MultiAgentSystem &ms = instance(all, "independent_drift").ms;
    MultiAgentSystem red = pwl::reduce_goals(ms);

    const auto obs1 = red.action_index("observe_goal_1");
    const auto obs2 = red.action_index("observe_goal_2");
    const auto m = red.action_index("m");
    const int fail1 = 6;
    const auto u0_start = 0, u0_obs = 1, u1_goal = 5;
    const auto v0_start = 0, v0_obs = 1, v1_goal = 5;

    // Observing first freezes the world and reveals the assigned tag.
    auto r = red.step(u0_start, v0_start, 0, obs1, obs2);
    CHECK(r == std::array<int, 3>{u0_obs, v0_obs, 0});

    // Raw moves then advance the base world; reaching the assigned goal
    // promotes to the goal tag.
    r = red.step(u0_obs, v0_obs, 0, m, m);
    CHECK(r == std::array<int, 3>{u1_goal, v1_goal, 0});

    // A raw first action forfeits.
    r = red.step(u0_start, v0_start, 0, m, m);
    CHECK(r[0] == fail1);

    // Playing the other agent's observe action also forfeits.
    r = red.step(u0_start, v0_start, 0, obs2, obs2);
    CHECK(r[0] == fail1);

    // Re-observing forfeits, from the observe tag and from the goal tag.
    CHECK(red.step(u0_obs, v0_obs, 0, obs1, m)[0] == fail1);
    CHECK(red.step(u1_goal, v0_obs, 0, obs1, m)[0] == fail1);

    // The goal tag persists over world moves.
    CHECK(red.step(u1_goal, v1_goal, 0, m, m) == std::array<int, 3>{u1_goal, v1_goal, 0});

    // A failed agent freezes the world for everyone.
    CHECK(red.step(fail1, v0_obs, 0, m, m)[0] == fail1);
    CHECK(red.step(fail1, v0_obs, 0, m, m)[1] == v0_obs);
}

TEST_CASE("exhaustive existence matches the designed answers") {
    for (const auto &inst : testutil::ma_instances()) {
        CAPTURE(inst.name);
        CHECK(pwl::ma_brute_force_exists(inst.ms, inst.horizon) == inst.expect);
    }
}

TEST_CASE("the goal rewrite preserves existence on fast instances") {
    const auto all = testutil::ma_instances();
    for (const char *name : {"independent_drift", "blocked_crossing", "goals_at_start", "either_start"}) {
        const auto &inst = instance(all, name);
        CAPTURE(inst.name);
        const bool before = pwl::ma_brute_force_exists(inst.ms, inst.horizon);
        const bool after = pwl::ma_brute_force_exists(pwl::reduce_goals(inst.ms), inst.horizon + 1);
        CHECK(before == inst.expect);
        CHECK(after == inst.expect);
    }
}

TEST_CASE("the exhaustive check refuses oversized inputs") {
    const auto all = testutil::ma_instances();
    const MultiAgentSystem &small = instance(all, "independent_drift").ms;

    CHECK_THROWS_AS(pwl::ma_brute_force_exists(small, 4), pwl::SizeLimit);
    CHECK_THROWS_AS(pwl::ma_brute_force_exists(instance(all, "blocked_crossing").ms, 1, 1), pwl::SizeLimit);

    testutil::MaShape shape;
    shape.states1 = {"s"};
    shape.initials1 = {"s"};
    shape.goals1 = {{"g", {"s"}}};
    shape.states2 = {"v"};
    shape.initials2 = {"v"};
    shape.goals2 = {{"h", {"v"}}};
    for (int a = 0; a < 9; ++a) shape.actions.push_back("a" + std::to_string(a));
    shape.behaviors = {"w"};
    shape.initial_behaviors = {"w"};
    MultiAgentSystem wide =
        testutil::make_ma(shape, [](int, int, int, int, int) { return std::array<int, 3>{0, 0, 0}; });
    CHECK_THROWS_AS(pwl::ma_brute_force_exists(wide, 1), pwl::SizeLimit);
}

TEST_CASE("joint system validation rejects inconsistent shapes") {
    const auto all = testutil::ma_instances();
    MultiAgentSystem ms = instance(all, "independent_drift").ms;
    CHECK_NOTHROW(ms.validate());

    SUBCASE("wrong joint table size") {
        ms.gamma.pop_back();
        CHECK_THROWS_AS(ms.validate(), pwl::ValidationError);
    }
    SUBCASE("initial behavior out of range") {
        ms.initial_behaviors = {5};
        CHECK_THROWS_AS(ms.validate(), pwl::ValidationError);
    }
    SUBCASE("goal mask out of range") {
        ms.agents[0].goals[0].states = {9};
        CHECK_THROWS_AS(ms.validate(), pwl::ValidationError);
    }
    SUBCASE("no goals") {
        ms.agents[0].goals.clear();
        CHECK_THROWS_AS(ms.validate(), pwl::ValidationError);
    }
    SUBCASE("no initials") {
        ms.agents[1].initials.clear();
        CHECK_THROWS_AS(ms.validate(), pwl::ValidationError);
    }
}
