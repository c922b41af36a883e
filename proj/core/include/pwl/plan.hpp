#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "pwl/system.hpp"

namespace pwl {

// A conditional plan as a finite lookup table from observation histories to
// actions, bounded by a horizon.  Undefined histories are permitted; the
// verifier reports them as a distinct outcome rather than an error.
struct PlanTable {
    std::size_t horizon = 0;
    std::map<HistoryKey, ActionId> entries;

    std::optional<ActionId> lookup(const HistoryKey &h) const {
        auto it = entries.find(h);
        if (it == entries.end()) return std::nullopt;
        return it->second;
    }

    std::size_t size() const { return entries.size(); }
};

// Rendering of a plan as a decision tree: edges carry the observed next
// state; each node's children partition its knowledge set.
struct DecisionTreeNode {
    enum class Kind { Internal, Goal, Undefined, Horizon };

    StateId state = 0;
    std::vector<BehaviorId> knowledge;  // sorted, nonempty
    Kind kind = Kind::Internal;
    std::optional<ActionId> action;  // set iff kind == Internal
    // Edge label (observed next state) -> subtree, in ascending state order.
    std::vector<std::pair<StateId, std::unique_ptr<DecisionTreeNode>>> children;
};

struct DecisionTreeView {
    std::unique_ptr<DecisionTreeNode> root;
    std::size_t node_count = 0;
};

// Checks every entry references valid ids, starts at the system's initial
// state, and fits the horizon (at most H actions per key).  Throws
// ValidationError otherwise.
void validate_plan(const PwlSystem &sys, const PlanTable &p);

// Like validate_plan but without a concrete system: used where plans run
// against state/action spaces that are not a basic PwlSystem.
void validate_plan_shape(std::size_t num_states, std::size_t num_actions, StateId initial, const PlanTable &p);

// Removes entries never consulted when the plan runs against each behavior
// for at most p.horizon steps.  The result has at most
// num_behaviors * horizon entries and canonicalization is idempotent.
PlanTable canonicalize_plan(const PwlSystem &sys, const PlanTable &p);

// Builds the plan that plays seq[k] on every plausible history of length k,
// with branches stopping early on goal states.  Requires |seq| <= horizon.
PlanTable plan_from_action_sequence(const PwlSystem &sys, const std::vector<ActionId> &seq, std::size_t horizon);

// Runs the plan against all behaviors at once and renders the resulting
// belief tree.  The root knowledge set is the full behavior index set.
DecisionTreeView decision_tree_view(const PwlSystem &sys, const PlanTable &p);

}  // namespace pwl
