#include "pwl/extended.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include "pwl/caps.hpp"
#include "pwl/errors.hpp"

namespace pwl {

StateId ExtendedSystem::state_index(const std::string &name) const {
    for (std::size_t i = 0; i < state_names.size(); ++i) {
        if (state_names[i] == name) return static_cast<StateId>(i);
    }
    throw IndexError("unknown state: " + name);
}

ActionId ExtendedSystem::action_index(const std::string &name) const {
    for (std::size_t i = 0; i < action_names.size(); ++i) {
        if (action_names[i] == name) return static_cast<ActionId>(i);
    }
    throw IndexError("unknown action: " + name);
}

BehaviorId ExtendedSystem::behavior_index(const std::string &name) const {
    for (std::size_t i = 0; i < behavior_names.size(); ++i) {
        if (behavior_names[i] == name) return static_cast<BehaviorId>(i);
    }
    throw IndexError("unknown behavior: " + name);
}

void ExtendedSystem::validate() const {
    if (state_names.empty()) throw ValidationError("empty state set");
    if (state_names.size() > caps().max_states) throw ValidationError("state count exceeds PWL_MAX_STATES");
    if (behavior_names.empty()) throw ValidationError("empty behavior set");
    if (behavior_names.size() > caps().max_behaviors) throw ValidationError("behavior count exceeds PWL_MAX_BEHAVIORS");

    std::set<std::string> seen;
    for (const auto &n : state_names) {
        if (n.empty()) throw ValidationError("empty state name");
        if (n.find('|') != std::string::npos) throw ValidationError("state name contains reserved '|': " + n);
        if (!seen.insert(n).second) throw ValidationError("duplicate state name: " + n);
    }
    seen.clear();
    for (const auto &n : action_names) {
        if (n.empty()) throw ValidationError("empty action name");
        if (n.find('|') != std::string::npos) throw ValidationError("action name contains reserved '|': " + n);
        if (!seen.insert(n).second) throw ValidationError("duplicate action name: " + n);
    }
    seen.clear();
    for (const auto &n : behavior_names) {
        if (n.empty()) throw ValidationError("empty behavior name");
        if (n.find('|') != std::string::npos) throw ValidationError("behavior name contains reserved '|': " + n);
        if (!seen.insert(n).second) throw ValidationError("duplicate behavior name: " + n);
    }

    if (initial < 0 || static_cast<std::size_t>(initial) >= num_states()) {
        throw ValidationError("initial state out of range");
    }
    if (initial_candidates.empty()) throw ValidationError("empty initial candidate set");
    std::set<BehaviorId> cand_seen;
    for (BehaviorId b : initial_candidates) {
        if (b < 0 || static_cast<std::size_t>(b) >= num_behaviors()) {
            throw ValidationError("initial candidate out of range");
        }
        if (!cand_seen.insert(b).second) throw ValidationError("duplicate initial candidate");
    }

    if (goal_mask.size() != num_states()) throw ValidationError("goal mask size mismatch");
    for (StateId q : goal_states) {
        if (q < 0 || static_cast<std::size_t>(q) >= num_states() || !goal_mask[static_cast<std::size_t>(q)]) {
            throw ValidationError("goal list inconsistent with goal mask");
        }
    }
    if (!std::is_sorted(goal_states.begin(), goal_states.end())) throw ValidationError("goal list not sorted");
    std::size_t marked = 0;
    for (char m : goal_mask) marked += (m != 0);
    if (marked != goal_states.size()) throw ValidationError("goal list inconsistent with goal mask");

    if (gamma.size() != num_states() * num_behaviors() * num_actions()) {
        throw ValidationError("non-total global transition");
    }
    for (const auto &[q, b] : gamma) {
        if (q < 0 || static_cast<std::size_t>(q) >= num_states()) {
            throw ValidationError("global transition state out of range");
        }
        if (b < 0 || static_cast<std::size_t>(b) >= num_behaviors()) {
            throw ValidationError("global transition behavior out of range");
        }
    }
}

Trace ext_simulate(const ExtendedSystem &es, const PlanTable &p, BehaviorId b0, std::size_t horizon) {
    if (std::find(es.initial_candidates.begin(), es.initial_candidates.end(), b0) == es.initial_candidates.end()) {
        throw IndexError("initial behavior is not a declared candidate");
    }
    Trace t;
    t.behavior = b0;
    StateId q = es.initial;
    BehaviorId b = b0;
    HistoryKey h(q);
    for (;;) {
        if (es.is_goal(q)) {
            t.outcome = Outcome::GoalReached;
            break;
        }
        if (t.steps.size() == horizon) {
            t.outcome = Outcome::HorizonExhausted;
            break;
        }
        auto a = p.lookup(h);
        if (!a) {
            t.outcome = Outcome::UndefinedEntry;
            t.undefined_history = h;
            break;
        }
        t.steps.emplace_back(q, *a);
        auto [q_next, b_next] = es.step(q, b, *a);
        q = q_next;
        b = b_next;
        h.append(*a, q);
    }
    t.final_state = q;
    t.goal_step = t.steps.size();
    return t;
}

Verdict ext_verify(const ExtendedSystem &es, const PlanTable &p, std::size_t horizon, double theta) {
    if (!(theta > 0.0 && theta <= 1.0)) throw ValidationError("threshold outside (0, 1]");
    validate_plan_shape(es.num_states(), es.num_actions(), es.initial, p);

    Verdict v;
    v.threshold = theta;
    for (BehaviorId b0 : es.initial_candidates) v.traces.push_back(ext_simulate(es, p, b0, horizon));
    for (const auto &t : v.traces) {
        v.step_applications += t.steps.size();
        if (t.outcome == Outcome::GoalReached) ++v.satisfied_count;
    }
    v.satisfied_fraction = static_cast<double>(v.satisfied_count) / static_cast<double>(v.traces.size());
    v.satisfactory = v.satisfied_fraction >= theta;
    return v;
}

namespace {

// Per surviving initial candidate: its index among the declared candidates
// and the behavior it has evolved into along the shared history.
using CandSet = std::vector<std::pair<int, BehaviorId>>;

struct ExtKey {
    StateId state;
    CandSet cands;
    bool operator==(const ExtKey &o) const = default;
};

struct ExtKeyHash {
    std::size_t operator()(const ExtKey &k) const {
        std::size_t h = std::hash<int>()(k.state);
        for (const auto &[c, b] : k.cands) {
            h = h * 1000003u + static_cast<std::size_t>(c) * 131u + static_cast<std::size_t>(b) + 1;
        }
        return h;
    }
};

struct MemoEntry {
    std::size_t min_solved = std::numeric_limits<std::size_t>::max();
    std::size_t max_failed = 0;
    bool has_failed = false;
};

class ExtSolver {
public:
    ExtSolver(const ExtendedSystem &es, SynthesisStats *stats) : es_(es), stats_(stats) {}

    // Successor groups for one action, keyed by observed next state; each
    // group carries the candidates whose evolution produced that state.
    std::map<StateId, CandSet> expand(StateId q, const CandSet &cands, ActionId a) const {
        std::map<StateId, CandSet> groups;
        for (const auto &[c, b] : cands) {
            auto [q_next, b_next] = es_.step(q, b, a);
            groups[q_next].emplace_back(c, b_next);
        }
        return groups;
    }

    bool solve(StateId q, const CandSet &cands, std::size_t budget) {
        if (stats_ != nullptr) ++stats_->explored_nodes;
        if (es_.is_goal(q)) return true;
        if (budget == 0) return false;

        MemoEntry &entry = memo_[ExtKey{q, cands}];
        if (budget >= entry.min_solved) return true;
        if (entry.has_failed && budget <= entry.max_failed) return false;

        for (ActionId a = 0; a < static_cast<ActionId>(es_.num_actions()); ++a) {
            bool all = true;
            for (const auto &[q_next, part] : expand(q, cands, a)) {
                if (!solve(q_next, part, budget - 1)) {
                    all = false;
                    break;
                }
            }
            if (all) {
                MemoEntry &e = memo_[ExtKey{q, cands}];
                if (budget < e.min_solved) e.min_solved = budget;
                return true;
            }
        }
        MemoEntry &e = memo_[ExtKey{q, cands}];
        if (!e.has_failed || budget > e.max_failed) {
            e.has_failed = true;
            e.max_failed = budget;
        }
        return false;
    }

    void extract(StateId q, const CandSet &cands, const HistoryKey &h, std::size_t budget, PlanTable &out) {
        if (es_.is_goal(q)) return;
        if (budget == 0) throw ValidationError("extraction reached an unsolved node");
        for (ActionId a = 0; a < static_cast<ActionId>(es_.num_actions()); ++a) {
            auto groups = expand(q, cands, a);
            bool all = true;
            for (const auto &[q_next, part] : groups) {
                if (!solve(q_next, part, budget - 1)) {
                    all = false;
                    break;
                }
            }
            if (all) {
                out.entries.emplace(h, a);
                for (const auto &[q_next, part] : groups) {
                    extract(q_next, part, h.extended(a, q_next), budget - 1, out);
                }
                return;
            }
        }
        throw ValidationError("extraction reached an unsolved node");
    }

private:
    const ExtendedSystem &es_;
    SynthesisStats *stats_;
    std::unordered_map<ExtKey, MemoEntry, ExtKeyHash> memo_;
};

}  // namespace

std::optional<PlanTable> ext_synthesize(const ExtendedSystem &es, std::size_t horizon, SynthesisStats *stats) {
    ExtSolver solver(es, stats);
    CandSet root;
    for (std::size_t i = 0; i < es.initial_candidates.size(); ++i) {
        root.emplace_back(static_cast<int>(i), es.initial_candidates[i]);
    }
    if (!solver.solve(es.initial, root, horizon)) return std::nullopt;
    PlanTable plan;
    plan.horizon = horizon;
    solver.extract(es.initial, root, HistoryKey(es.initial), horizon, plan);
    return plan;
}

ExtendedSystem embed_basic(const PwlSystem &sys) {
    sys.validate();
    ExtendedSystem es;
    es.state_names = sys.state_names;
    es.action_names = sys.action_names;
    for (const auto &b : sys.behaviors) es.behavior_names.push_back(b.name);
    es.initial = sys.initial;
    for (BehaviorId b = 0; b < static_cast<BehaviorId>(sys.num_behaviors()); ++b) es.initial_candidates.push_back(b);
    es.goal_mask = sys.goal_mask;
    es.goal_states = sys.goal_states;
    es.gamma.resize(sys.num_states() * sys.num_behaviors() * sys.num_actions());
    for (StateId q = 0; q < static_cast<StateId>(sys.num_states()); ++q) {
        for (BehaviorId b = 0; b < static_cast<BehaviorId>(sys.num_behaviors()); ++b) {
            for (ActionId a = 0; a < static_cast<ActionId>(sys.num_actions()); ++a) {
                es.gamma[(static_cast<std::size_t>(q) * sys.num_behaviors() + static_cast<std::size_t>(b)) *
                             sys.num_actions() +
                         static_cast<std::size_t>(a)] = {sys.step(b, q, a), b};
            }
        }
    }
    return es;
}

}  // namespace pwl
