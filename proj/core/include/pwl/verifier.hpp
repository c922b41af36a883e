#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pwl/plan.hpp"
#include "pwl/system.hpp"

namespace pwl {

enum class Outcome { GoalReached, UndefinedEntry, HorizonExhausted };

// One execution of a plan under a single behavior.
struct Trace {
    BehaviorId behavior = 0;
    // (state the agent was in, action it took), in order.
    std::vector<std::pair<StateId, ActionId>> steps;
    StateId final_state = 0;
    Outcome outcome = Outcome::HorizonExhausted;
    // Number of steps taken before stopping; equals steps.size().
    std::size_t goal_step = 0;
    // Set when outcome is UndefinedEntry: the history with no plan entry.
    std::optional<HistoryKey> undefined_history;
};

struct Verdict {
    std::vector<Trace> traces;  // one per behavior, in behavior order
    std::size_t satisfied_count = 0;
    double satisfied_fraction = 0.0;
    double threshold = 1.0;
    bool satisfactory = false;
    std::size_t step_applications = 0;  // total transitions applied
};

// Runs the plan under one behavior for at most `horizon` steps: stop on
// goal, then on horizon, then on a missing plan entry.
Trace simulate(const PwlSystem &sys, const PlanTable &p, BehaviorId behavior, std::size_t horizon);

// Simulates under every behavior and aggregates.  A plan is satisfactory
// at threshold theta when at least that fraction of behaviors reach the
// goal.  Throws ValidationError on an invalid plan or theta outside (0, 1].
Verdict verify(const PwlSystem &sys, const PlanTable &p, std::size_t horizon, double theta);

}  // namespace pwl
