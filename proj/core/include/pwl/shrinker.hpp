#pragma once

#include "pwl/plan.hpp"
#include "pwl/system.hpp"

namespace pwl {

// Rewrites a satisfactory plan so that every branch executes at most
// s*t actions (s = number of behaviors, t = number of states), by splicing
// out path segments between repeats of the same (state, knowledge) label:
// no learning happens on such a segment, so every behavior that enters it
// leaves it in the same state and knowledge, and the segment can be cut for
// the whole branch.  The earliest repeat is spliced first, taking the
// longest available segment; the loop runs to fixpoint.
//
// Precondition: verify(sys, p, p.horizon, 1) is satisfactory; throws
// NotSatisfactory otherwise.  The output plan has horizon s*t and passes
// verification at threshold 1.  Shrinking is idempotent.
PlanTable shrink(const PwlSystem &sys, const PlanTable &p);

}  // namespace pwl
