#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace pwl {

using StateId = int;
using ActionId = int;
using BehaviorId = int;

// One candidate environment behavior: a total transition function over
// (state, action), stored row-major as state * num_actions + action.
struct BehaviorTable {
    std::string name;
    std::vector<StateId> next;

    StateId step(StateId q, ActionId a, std::size_t num_actions) const {
        return next[static_cast<std::size_t>(q) * num_actions + static_cast<std::size_t>(a)];
    }
};

// A planning-while-learning system: observable states, actions, an initial
// state, a goal set, and a finite set of candidate behaviors.  Exactly one
// behavior governs the environment; the agent learns which by acting.
struct PwlSystem {
    std::vector<std::string> state_names;
    std::vector<std::string> action_names;
    StateId initial = 0;
    std::vector<BehaviorTable> behaviors;
    std::vector<char> goal_mask;       // indexed by StateId
    std::vector<StateId> goal_states;  // sorted ascending

    std::size_t num_states() const { return state_names.size(); }
    std::size_t num_actions() const { return action_names.size(); }
    std::size_t num_behaviors() const { return behaviors.size(); }

    bool is_goal(StateId q) const { return goal_mask[static_cast<std::size_t>(q)] != 0; }

    StateId step(BehaviorId b, StateId q, ActionId a) const {
        return behaviors[static_cast<std::size_t>(b)].step(q, a, num_actions());
    }

    StateId state_index(const std::string &name) const;    // throws IndexError
    ActionId action_index(const std::string &name) const;  // throws IndexError

    // Throws ValidationError naming the first violated invariant.
    void validate() const;
};

// Alternating observation history q0 a1 q1 ... an qn, stored as raw ids:
// states at even positions, actions at odd positions.  Always odd length.
class HistoryKey {
public:
    HistoryKey() = default;
    explicit HistoryKey(StateId q0) : ids_{q0} {}
    // Takes an interleaved id sequence; throws ValidationError on bad shape.
    static HistoryKey from_ids(std::vector<int> ids);

    StateId initial_state() const { return ids_.front(); }
    StateId last_state() const { return ids_.back(); }
    std::size_t num_actions() const { return ids_.size() / 2; }
    ActionId action_at(std::size_t i) const { return ids_[2 * i + 1]; }
    StateId state_at(std::size_t i) const { return ids_[2 * i]; }

    HistoryKey extended(ActionId a, StateId q) const;
    void append(ActionId a, StateId q);
    void pop();  // removes the last (action, state) pair

    const std::vector<int> &ids() const { return ids_; }

    friend auto operator<=>(const HistoryKey &, const HistoryKey &) = default;

private:
    std::vector<int> ids_;
};

// Behavior indices consistent with a history: those whose replay from the
// history's initial state reproduces every observed successor.  Sorted.
std::vector<BehaviorId> consistent_behaviors(const PwlSystem &sys, const HistoryKey &h);

// One-step knowledge refinement: members of `knowledge` that map (q, a) to
// q_next.  `knowledge` must be sorted; the result is sorted.
std::vector<BehaviorId> refine_knowledge(const PwlSystem &sys, const std::vector<BehaviorId> &knowledge,
                                         StateId q, ActionId a, StateId q_next);

// Checks the history is well formed for `sys` and every transition in it is
// realizable by at least one behavior.  Throws ValidationError otherwise.
void validate_history(const PwlSystem &sys, const HistoryKey &h);

}  // namespace pwl
