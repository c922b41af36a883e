#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "pwl/plan.hpp"
#include "pwl/system.hpp"

namespace pwl {

// A 3-CNF literal: 1-based variable index plus polarity.
struct Lit {
    int var = 0;
    bool positive = true;
};

struct Clause3 {
    std::array<Lit, 3> lits;
};

// A 3-CNF formula whose clauses each mention three distinct variables, so
// every clause has exactly seven satisfying assignments over its variables.
struct Cnf3 {
    int num_vars = 0;
    std::vector<Clause3> clauses;

    void validate() const;  // throws ValidationError
};

// Total truth assignment; index i holds the value of variable i+1.
using Assignment = std::vector<int>;

// Encodes satisfiability of phi as plan existence.  States are a black hole
// b plus a main path q1..q_{n+t+1} (|Q| = n+t+2, goal = last state, initial
// q1).  Two behaviors per variable (2n total); 9 actions: "0", "1" and
// a1..a7, where a_k names the k-th satisfying assignment of a clause in
// lexicographic order over its variables sorted by index.  On variable row
// q_i, playing the value a behavior disputes sends that behavior to the
// goal; agreeing behaviors advance; a1..a7 fall into b.  On clause row
// q_{n+j}, a_k advances exactly the behaviors compatible with that
// assignment and drops the rest into b; "0"/"1" fall into b.
PwlSystem system_from_cnf(const Cnf3 &phi);

// The straight-line plan that plays S's values on the variable rows and the
// matching a_k on each clause row; horizon n+t.  Throws
// RestrictionUnsatisfied if S falsifies some clause.
PlanTable plan_from_assignment(const Cnf3 &phi, const Assignment &s);
PlanTable plan_from_assignment(const Cnf3 &phi, const Assignment &s, const PwlSystem &sys);

// Reads the assignment off a satisfactory plan's main-path actions.
// Throws NotSatisfactory when the plan does not verify at threshold 1.
Assignment assignment_from_plan(const Cnf3 &phi, const PlanTable &p);
Assignment assignment_from_plan(const Cnf3 &phi, const PlanTable &p, const PwlSystem &sys);

// Brute-force satisfiability: enumerates assignments in lexicographic order
// (all-zeros first) and returns the first satisfying one, or nullopt when
// unsatisfiable.  Guarded to num_vars <= 25; throws SizeLimit beyond.
std::optional<Assignment> sat_oracle(const Cnf3 &phi);

bool clause_satisfied(const Clause3 &c, const Assignment &s);

// Seeded random 3-CNF over `num_vars` variables with `num_clauses` clauses,
// three distinct variables per clause, uniform polarities.
Cnf3 random_cnf(std::uint64_t seed, int num_vars, int num_clauses);

}  // namespace pwl
