#include "pwl/synthesizer.hpp"

#include <limits>
#include <map>
#include <unordered_map>

#include "pwl/errors.hpp"

namespace pwl {

std::vector<BeliefNode> successors(const PwlSystem &sys, const BeliefNode &node, ActionId a) {
    if (a < 0 || static_cast<std::size_t>(a) >= sys.num_actions()) throw IndexError("action id out of range");
    std::map<StateId, std::vector<BehaviorId>> groups;
    for (BehaviorId b : node.knowledge) groups[sys.step(b, node.state, a)].push_back(b);
    std::vector<BeliefNode> out;
    out.reserve(groups.size());
    for (auto &[q_next, part] : groups) out.push_back(BeliefNode{q_next, std::move(part)});
    return out;
}

std::size_t default_horizon(const PwlSystem &sys) { return sys.num_behaviors() * sys.num_states(); }

namespace {

struct NodeKey {
    StateId state;
    std::vector<BehaviorId> knowledge;
    bool operator==(const NodeKey &o) const = default;
};

struct NodeKeyHash {
    std::size_t operator()(const NodeKey &k) const {
        std::size_t h = std::hash<int>()(k.state);
        for (BehaviorId b : k.knowledge) h = h * 1000003u + static_cast<std::size_t>(b) + 1;
        return h;
    }
};

// Solvability is monotone in the budget, so one record per belief node
// suffices: the smallest budget known to solve it and the largest known to
// fail.  Budgets in between are recomputed.
struct MemoEntry {
    std::size_t min_solved = std::numeric_limits<std::size_t>::max();
    std::size_t max_failed = 0;
    bool has_failed = false;
};

class Solver {
public:
    Solver(const PwlSystem &sys, SynthesisStats *stats) : sys_(sys), stats_(stats) {}

    bool solve(const BeliefNode &node, std::size_t budget) {
        if (stats_ != nullptr) ++stats_->explored_nodes;
        if (sys_.is_goal(node.state)) return true;
        if (budget == 0) return false;

        MemoEntry &entry = memo_[NodeKey{node.state, node.knowledge}];
        if (budget >= entry.min_solved) return true;
        if (entry.has_failed && budget <= entry.max_failed) return false;

        for (ActionId a = 0; a < static_cast<ActionId>(sys_.num_actions()); ++a) {
            bool all = true;
            for (const BeliefNode &next : successors(sys_, node, a)) {
                if (!solve(next, budget - 1)) {
                    all = false;
                    break;
                }
            }
            if (all) {
                MemoEntry &e = memo_[NodeKey{node.state, node.knowledge}];
                if (budget < e.min_solved) e.min_solved = budget;
                return true;
            }
        }
        MemoEntry &e = memo_[NodeKey{node.state, node.knowledge}];
        if (!e.has_failed || budget > e.max_failed) {
            e.has_failed = true;
            e.max_failed = budget;
        }
        return false;
    }

    void extract(const BeliefNode &node, const HistoryKey &h, std::size_t budget, PlanTable &out) {
        if (sys_.is_goal(node.state)) return;
        if (budget == 0) throw ValidationError("extraction reached an unsolved node");
        for (ActionId a = 0; a < static_cast<ActionId>(sys_.num_actions()); ++a) {
            auto parts = successors(sys_, node, a);
            bool all = true;
            for (const BeliefNode &next : parts) {
                if (!solve(next, budget - 1)) {
                    all = false;
                    break;
                }
            }
            if (all) {
                out.entries.emplace(h, a);
                for (const BeliefNode &next : parts) {
                    extract(next, h.extended(a, next.state), budget - 1, out);
                }
                return;
            }
        }
        throw ValidationError("extraction reached an unsolved node");
    }

private:
    const PwlSystem &sys_;
    SynthesisStats *stats_;
    std::unordered_map<NodeKey, MemoEntry, NodeKeyHash> memo_;
};

BeliefNode root_node(const PwlSystem &sys) {
    BeliefNode root;
    root.state = sys.initial;
    for (BehaviorId b = 0; b < static_cast<BehaviorId>(sys.num_behaviors()); ++b) root.knowledge.push_back(b);
    return root;
}

}  // namespace

bool exists_plan(const PwlSystem &sys, std::size_t horizon, SynthesisStats *stats) {
    Solver solver(sys, stats);
    return solver.solve(root_node(sys), horizon);
}

bool exists_plan(const PwlSystem &sys) { return exists_plan(sys, default_horizon(sys), nullptr); }

std::optional<PlanTable> synthesize(const PwlSystem &sys, std::size_t horizon, SynthesisStats *stats) {
    Solver solver(sys, stats);
    BeliefNode root = root_node(sys);
    if (!solver.solve(root, horizon)) return std::nullopt;
    PlanTable plan;
    plan.horizon = horizon;
    solver.extract(root, HistoryKey(sys.initial), horizon, plan);
    return canonicalize_plan(sys, plan);
}

std::optional<PlanTable> synthesize(const PwlSystem &sys) { return synthesize(sys, default_horizon(sys), nullptr); }

}  // namespace pwl
