#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pwl/plan.hpp"
#include "pwl/system.hpp"

namespace pwl {

// Search node: an observable state plus the behaviors consistent with the
// history that led there.
struct BeliefNode {
    StateId state = 0;
    std::vector<BehaviorId> knowledge;  // sorted, nonempty
};

struct SynthesisStats {
    std::size_t explored_nodes = 0;  // solver invocations, memo hits included
};

// Partitions node.knowledge by the successor each behavior produces under
// action a; returned nodes are ordered by ascending successor state.
std::vector<BeliefNode> successors(const PwlSystem &sys, const BeliefNode &node, ActionId a);

// Horizon that makes the bounded search complete: after s*t steps on any
// branch some (state, knowledge) pair has repeated without learning, so
// longer plans never help.
std::size_t default_horizon(const PwlSystem &sys);

// True iff a plan exists whose every branch takes at most `horizon` actions
// and that reaches the goal under every behavior.  AND-OR search over
// belief nodes: a node is solved with budget d iff its state is a goal, or
// d > 0 and some action has every successor solved with budget d-1.
bool exists_plan(const PwlSystem &sys, std::size_t horizon, SynthesisStats *stats = nullptr);
bool exists_plan(const PwlSystem &sys);  // horizon = default_horizon(sys)

// Builds a canonical satisfactory plan of horizon `horizon`, or nullopt if
// none exists.  Deterministic: actions are tried in declaration order and
// the first solving action is chosen; successors expand in state order.
std::optional<PlanTable> synthesize(const PwlSystem &sys, std::size_t horizon, SynthesisStats *stats = nullptr);
std::optional<PlanTable> synthesize(const PwlSystem &sys);  // horizon = default_horizon(sys)

}  // namespace pwl
