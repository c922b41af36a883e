#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pwl/plan.hpp"
#include "pwl/synthesizer.hpp"
#include "pwl/system.hpp"
#include "pwl/verifier.hpp"

namespace pwl {

// A system whose environment behavior can itself change as the agent acts:
// the global transition maps (state, behavior, action) to the next state
// and next behavior.  The agent observes states only; the true initial
// behavior is one of the declared candidates.
struct ExtendedSystem {
    std::vector<std::string> state_names;
    std::vector<std::string> action_names;
    std::vector<std::string> behavior_names;
    StateId initial = 0;
    std::vector<BehaviorId> initial_candidates;  // declaration order, unique, nonempty
    // (q * num_behaviors + b) * num_actions + a -> (next state, next behavior)
    std::vector<std::pair<StateId, BehaviorId>> gamma;
    std::vector<char> goal_mask;
    std::vector<StateId> goal_states;  // sorted ascending

    std::size_t num_states() const { return state_names.size(); }
    std::size_t num_actions() const { return action_names.size(); }
    std::size_t num_behaviors() const { return behavior_names.size(); }

    bool is_goal(StateId q) const { return goal_mask[static_cast<std::size_t>(q)] != 0; }

    std::pair<StateId, BehaviorId> step(StateId q, BehaviorId b, ActionId a) const {
        return gamma[(static_cast<std::size_t>(q) * num_behaviors() + static_cast<std::size_t>(b)) * num_actions() +
                     static_cast<std::size_t>(a)];
    }

    StateId state_index(const std::string &name) const;        // throws IndexError
    ActionId action_index(const std::string &name) const;      // throws IndexError
    BehaviorId behavior_index(const std::string &name) const;  // throws IndexError

    void validate() const;  // throws ValidationError
};

// Runs the plan with hidden behavior evolution starting from candidate b0.
// Trace.behavior holds b0's behavior id.  b0 must be a declared candidate.
Trace ext_simulate(const ExtendedSystem &es, const PlanTable &p, BehaviorId b0, std::size_t horizon);

// Verifies the plan against every initial candidate, in declaration order;
// Verdict.traces holds one trace per candidate.
Verdict ext_verify(const ExtendedSystem &es, const PlanTable &p, std::size_t horizon, double theta);

// Depth-bounded AND-OR search where a node tracks, per surviving initial
// candidate, the behavior it has evolved into.  The horizon is always
// explicit: behavior changes break the s*t completeness bound that basic
// systems enjoy.
std::optional<PlanTable> ext_synthesize(const ExtendedSystem &es, std::size_t horizon,
                                        SynthesisStats *stats = nullptr);

// Views a basic system as an extended one: behaviors never change and every
// behavior is an initial candidate.
ExtendedSystem embed_basic(const PwlSystem &sys);

}  // namespace pwl
