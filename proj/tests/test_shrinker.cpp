#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "pwl/domains.hpp"
#include "pwl/errors.hpp"
#include "pwl/shrinker.hpp"
#include "pwl/synthesizer.hpp"
#include "pwl/verifier.hpp"

using pwl::HistoryKey;
using pwl::PlanTable;
using pwl::PwlSystem;

TEST_CASE("no-learning loops splice away completely") {
    // a0 holds still everywhere, a1 advances; both (identical) behaviors
    // make every loop a label repeat.
    PwlSystem sys = testutil::make_system(2, 2, 0, {1}, {{0, 1, 1, 1}, {0, 1, 1, 1}});
    PlanTable direct;
    direct.horizon = 1;
    direct.entries.emplace(HistoryKey(0), 1);

    PlanTable padded = testutil::pad_with_loops(sys, direct, 6);
    CHECK(padded.horizon == 7);
    CHECK(padded.size() == 7);
    REQUIRE(pwl::verify(sys, padded, padded.horizon, 1.0).satisfactory);

    PlanTable shrunk = pwl::shrink(sys, padded);
    CHECK(shrunk.horizon == sys.num_behaviors() * sys.num_states());
    CHECK(shrunk.size() == 1);
    CHECK(shrunk.lookup(HistoryKey(0)) == 1);
    CHECK(pwl::verify(sys, shrunk, shrunk.horizon, 1.0).satisfactory);
}

TEST_CASE("loops in the middle of a plan splice too") {
    PwlSystem sys = testutil::make_system(3, 2, 0, {2}, {{0, 1, 1, 2, 2, 2}, {0, 1, 1, 2, 2, 2}});
    PlanTable p;
    p.horizon = 5;
    HistoryKey h(0);
    p.entries.emplace(h, 1);
    h.append(1, 1);
    for (int i = 0; i < 3; ++i) {
        p.entries.emplace(h, 0);
        h.append(0, 1);
    }
    p.entries.emplace(h, 1);
    REQUIRE(pwl::verify(sys, p, 5, 1.0).satisfactory);

    PlanTable shrunk = pwl::shrink(sys, p);
    CHECK(shrunk.size() == 2);
    CHECK(testutil::max_branch_length(shrunk) == 2);
    CHECK(shrunk.lookup(HistoryKey(0)) == 1);
    CHECK(shrunk.lookup(HistoryKey(0).extended(1, 1)) == 1);
    CHECK(pwl::verify(sys, shrunk, shrunk.horizon, 1.0).satisfactory);
}

TEST_CASE("shrinking an already short plan keeps its entries") {
    PwlSystem sys = pwl::gen_intro_example();
    auto plan = pwl::synthesize(sys, 3);
    REQUIRE(plan.has_value());

    PlanTable shrunk = pwl::shrink(sys, *plan);
    CHECK(shrunk.entries == plan->entries);
    CHECK(shrunk.horizon == 12);

    PlanTable again = pwl::shrink(sys, shrunk);
    CHECK(again.entries == shrunk.entries);
    CHECK(again.horizon == shrunk.horizon);
}

TEST_CASE("unsatisfactory plans are rejected") {
    PwlSystem sys = pwl::gen_intro_example();
    PlanTable empty;
    empty.horizon = 3;
    CHECK_THROWS_WITH_AS(pwl::shrink(sys, empty), "plan is not satisfactory at its own horizon",
                         pwl::NotSatisfactory);

    // Satisfactory under E1 only: still rejected.
    PlanTable partial = pwl::plan_from_action_sequence(sys, {sys.action_index("x")}, 3);
    CHECK_THROWS_AS(pwl::shrink(sys, partial), pwl::NotSatisfactory);
}

TEST_CASE("padded random plans shrink within the product bound") {
    int tested = 0;
    for (std::uint64_t seed = 1; tested < 25 && seed < 400; ++seed) {
        const std::size_t num_states = 2 + seed % 7;   // up to 8
        const std::size_t num_actions = 2 + seed % 3;  // up to 4
        const std::size_t num_behaviors = 2 + seed % 3;
        PwlSystem sys = testutil::with_identity_action0(
            pwl::gen_random(seed, num_states, num_actions, num_behaviors, 0.25));
        if (sys.is_goal(sys.initial)) continue;
        auto plan = pwl::synthesize(sys);
        if (!plan.has_value()) continue;
        ++tested;

        const std::size_t bound = sys.num_behaviors() * sys.num_states();
        PlanTable padded = testutil::pad_with_loops(sys, *plan, bound + 3);
        REQUIRE(pwl::verify(sys, padded, padded.horizon, 1.0).satisfactory);
        CHECK(testutil::max_branch_length(padded) > bound);

        PlanTable shrunk = pwl::shrink(sys, padded);
        CHECK(shrunk.horizon == bound);
        CHECK(testutil::max_branch_length(shrunk) <= bound);
        CHECK(pwl::verify(sys, shrunk, bound, 1.0).satisfactory);

        PlanTable again = pwl::shrink(sys, shrunk);
        CHECK(again.entries == shrunk.entries);
    }
    CHECK(tested == 25);
}

TEST_CASE("shrunk output stays within the consulted-entry budget") {
    PwlSystem sys = testutil::with_identity_action0(pwl::gen_random(11, 6, 3, 3, 0.2));
    if (!sys.is_goal(sys.initial)) {
        auto plan = pwl::synthesize(sys);
        if (plan.has_value()) {
            PlanTable padded = testutil::pad_with_loops(sys, *plan, 20);
            PlanTable shrunk = pwl::shrink(sys, padded);
            PlanTable canon = pwl::canonicalize_plan(sys, shrunk);
            CHECK(canon.size() <= sys.num_behaviors() * shrunk.horizon);
        }
    }
}
