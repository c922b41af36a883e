#include "pwl/reductions.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "pwl/errors.hpp"
#include "pwl/verifier.hpp"

namespace pwl {

void Cnf3::validate() const {
    if (num_vars < 1) throw ValidationError("formula needs at least one variable");
    if (clauses.empty()) throw ValidationError("formula needs at least one clause");
    for (const Clause3 &c : clauses) {
        for (const Lit &l : c.lits) {
            if (l.var < 1 || l.var > num_vars) throw ValidationError("literal variable out of range");
        }
        if (c.lits[0].var == c.lits[1].var || c.lits[0].var == c.lits[2].var || c.lits[1].var == c.lits[2].var) {
            throw ValidationError("clause without 3 distinct variables");
        }
    }
}

bool clause_satisfied(const Clause3 &c, const Assignment &s) {
    for (const Lit &l : c.lits) {
        const int v = s[static_cast<std::size_t>(l.var - 1)];
        if ((v == 1) == l.positive) return true;
    }
    return false;
}

namespace {

// The clause's variables sorted ascending, paired with their polarities.
std::array<Lit, 3> sorted_lits(const Clause3 &c) {
    std::array<Lit, 3> lits = c.lits;
    std::sort(lits.begin(), lits.end(), [](const Lit &a, const Lit &b) { return a.var < b.var; });
    return lits;
}

// The k-th (1-based) satisfying assignment of the clause over its sorted
// variables, counting 000..111 in lexicographic order and skipping the one
// falsifying combination.
std::array<int, 3> kth_satisfying(const std::array<Lit, 3> &lits, int k) {
    int seen = 0;
    for (int bits = 0; bits < 8; ++bits) {
        const std::array<int, 3> vals = {(bits >> 2) & 1, (bits >> 1) & 1, bits & 1};
        bool sat = false;
        for (int j = 0; j < 3; ++j) {
            if ((vals[static_cast<std::size_t>(j)] == 1) == lits[static_cast<std::size_t>(j)].positive) sat = true;
        }
        if (!sat) continue;
        if (++seen == k) return vals;
    }
    throw ValidationError("satisfying-assignment index out of range");
}

// The 1-based index of S's restriction among the clause's satisfying
// assignments, or 0 when the restriction falsifies the clause.
int restriction_index(const Clause3 &c, const Assignment &s) {
    const auto lits = sorted_lits(c);
    std::array<int, 3> want{};
    bool sat = false;
    for (int j = 0; j < 3; ++j) {
        want[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(lits[static_cast<std::size_t>(j)].var - 1)];
        if ((want[static_cast<std::size_t>(j)] == 1) == lits[static_cast<std::size_t>(j)].positive) sat = true;
    }
    if (!sat) return 0;
    int seen = 0;
    for (int bits = 0; bits < 8; ++bits) {
        const std::array<int, 3> vals = {(bits >> 2) & 1, (bits >> 1) & 1, bits & 1};
        bool ok = false;
        for (int j = 0; j < 3; ++j) {
            if ((vals[static_cast<std::size_t>(j)] == 1) == lits[static_cast<std::size_t>(j)].positive) ok = true;
        }
        if (!ok) continue;
        ++seen;
        if (vals == want) return seen;
    }
    return 0;
}

}  // namespace

PwlSystem system_from_cnf(const Cnf3 &phi) {
    phi.validate();
    const int n = phi.num_vars;
    const int t = static_cast<int>(phi.clauses.size());
    const int goal = n + t + 1;  // state ids: 0 = b, 1..n+t+1 = main path

    PwlSystem sys;
    sys.state_names.push_back("b");
    for (int i = 1; i <= n + t + 1; ++i) sys.state_names.push_back("q" + std::to_string(i));
    sys.action_names = {"0", "1"};
    for (int k = 1; k <= 7; ++k) sys.action_names.push_back("a" + std::to_string(k));
    sys.initial = 1;
    sys.goal_mask.assign(sys.num_states(), 0);
    sys.goal_mask[static_cast<std::size_t>(goal)] = 1;
    sys.goal_states = {goal};

    const std::size_t na = sys.num_actions();
    for (int pol = 0; pol <= 1; ++pol) {
        for (int l = 1; l <= n; ++l) {
            BehaviorTable bt;
            bt.name = "E" + std::to_string(l) + "_" + std::to_string(pol);
            bt.next.assign(sys.num_states() * na, 0);
            auto set = [&](int q, int a, int target) { bt.next[static_cast<std::size_t>(q) * na + static_cast<std::size_t>(a)] = target; };
            for (int a = 0; a < static_cast<int>(na); ++a) {
                set(0, a, 0);        // black hole
                set(goal, a, goal);  // goal self-loops; runs stop at the goal anyway
            }
            for (int i = 1; i <= n; ++i) {
                // Variable row: playing the value this behavior disputes
                // releases it to the goal; otherwise the row advances.
                set(i, 0, (l == i && pol == 1) ? goal : i + 1);
                set(i, 1, (l == i && pol == 0) ? goal : i + 1);
                for (int k = 1; k <= 7; ++k) set(i, 1 + k, 0);
            }
            for (int j = 1; j <= t; ++j) {
                const int row = n + j;
                set(row, 0, 0);
                set(row, 1, 0);
                const auto lits = sorted_lits(phi.clauses[static_cast<std::size_t>(j - 1)]);
                for (int k = 1; k <= 7; ++k) {
                    const auto vals = kth_satisfying(lits, k);
                    int target = row + 1;
                    for (int m = 0; m < 3; ++m) {
                        if (lits[static_cast<std::size_t>(m)].var == l && vals[static_cast<std::size_t>(m)] != pol) {
                            target = 0;  // the assignment contradicts this behavior's variable value
                        }
                    }
                    set(row, 1 + k, target);
                }
            }
            sys.behaviors.push_back(std::move(bt));
        }
    }
    sys.validate();
    return sys;
}

PlanTable plan_from_assignment(const Cnf3 &phi, const Assignment &s, const PwlSystem &sys) {
    phi.validate();
    if (s.size() != static_cast<std::size_t>(phi.num_vars)) throw ValidationError("assignment size mismatch");
    for (int v : s) {
        if (v != 0 && v != 1) throw ValidationError("assignment value not 0/1");
    }
    std::vector<ActionId> seq;
    for (int v : s) seq.push_back(v);
    for (std::size_t j = 0; j < phi.clauses.size(); ++j) {
        const int k = restriction_index(phi.clauses[j], s);
        if (k == 0) {
            throw RestrictionUnsatisfied("assignment falsifies clause " + std::to_string(j + 1));
        }
        seq.push_back(1 + k);
    }
    return plan_from_action_sequence(sys, seq, seq.size());
}

PlanTable plan_from_assignment(const Cnf3 &phi, const Assignment &s) {
    return plan_from_assignment(phi, s, system_from_cnf(phi));
}

Assignment assignment_from_plan(const Cnf3 &phi, const PlanTable &p, const PwlSystem &sys) {
    const int n = phi.num_vars;
    const int t = static_cast<int>(phi.clauses.size());
    Verdict v = verify(sys, p, static_cast<std::size_t>(n + t), 1.0);
    if (!v.satisfactory) throw NotSatisfactory("plan does not reach the goal under every behavior");

    Assignment s;
    HistoryKey h(sys.initial);
    for (int i = 1; i <= n; ++i) {
        auto a = p.lookup(h);
        // A satisfactory plan always defines the main path and keeps it on
        // value actions: anything else drops live behaviors into b.
        if (!a || (*a != 0 && *a != 1)) throw NotSatisfactory("plan leaves the main path");
        s.push_back(*a);
        h.append(*a, i + 1);
    }
    return s;
}

Assignment assignment_from_plan(const Cnf3 &phi, const PlanTable &p) {
    return assignment_from_plan(phi, p, system_from_cnf(phi));
}

std::optional<Assignment> sat_oracle(const Cnf3 &phi) {
    phi.validate();
    const int n = phi.num_vars;
    if (n > 25) throw SizeLimit("brute-force SAT limited to 25 variables");
    for (std::uint64_t m = 0; m < (1ull << n); ++m) {
        Assignment s(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = static_cast<int>((m >> (n - 1 - i)) & 1);
        bool ok = true;
        for (const Clause3 &c : phi.clauses) {
            if (!clause_satisfied(c, s)) {
                ok = false;
                break;
            }
        }
        if (ok) return s;
    }
    return std::nullopt;
}

Cnf3 random_cnf(std::uint64_t seed, int num_vars, int num_clauses) {
    if (num_vars < 3) throw ValidationError("random formula needs at least 3 variables");
    if (num_clauses < 1) throw ValidationError("random formula needs at least one clause");
    std::mt19937_64 rng(seed);
    Cnf3 phi;
    phi.num_vars = num_vars;
    for (int j = 0; j < num_clauses; ++j) {
        Clause3 c;
        int picked = 0;
        while (picked < 3) {
            const int v = static_cast<int>(rng() % static_cast<std::uint64_t>(num_vars)) + 1;
            bool dup = false;
            for (int m = 0; m < picked; ++m) dup = dup || c.lits[static_cast<std::size_t>(m)].var == v;
            if (dup) continue;
            c.lits[static_cast<std::size_t>(picked)] = Lit{v, (rng() & 1) == 1};
            ++picked;
        }
        phi.clauses.push_back(c);
    }
    phi.validate();
    return phi;
}

}  // namespace pwl
