#include "pwl/plan.hpp"

#include <set>

#include "pwl/errors.hpp"

namespace pwl {

void validate_plan_shape(std::size_t num_states, std::size_t num_actions, StateId initial, const PlanTable &p) {
    const auto n_states = static_cast<int>(num_states);
    const auto n_actions = static_cast<int>(num_actions);
    for (const auto &[h, a] : p.entries) {
        if (h.ids().empty()) throw ValidationError("empty plan history");
        if (h.initial_state() != initial) throw ValidationError("plan history does not start at the initial state");
        for (std::size_t i = 0; i <= h.num_actions(); ++i) {
            if (h.state_at(i) < 0 || h.state_at(i) >= n_states) throw ValidationError("plan history state out of range");
        }
        for (std::size_t i = 0; i < h.num_actions(); ++i) {
            if (h.action_at(i) < 0 || h.action_at(i) >= n_actions) throw ValidationError("plan history action out of range");
        }
        if (h.num_actions() > p.horizon) throw ValidationError("plan entry beyond horizon");
        if (a < 0 || a >= n_actions) throw ValidationError("plan action out of range");
    }
}

void validate_plan(const PwlSystem &sys, const PlanTable &p) {
    validate_plan_shape(sys.num_states(), sys.num_actions(), sys.initial, p);
}

PlanTable canonicalize_plan(const PwlSystem &sys, const PlanTable &p) {
    validate_plan(sys, p);
    std::set<HistoryKey> used;
    for (BehaviorId b = 0; b < static_cast<BehaviorId>(sys.num_behaviors()); ++b) {
        StateId q = sys.initial;
        HistoryKey h(q);
        for (;;) {
            if (sys.is_goal(q)) break;
            if (h.num_actions() == p.horizon) break;
            auto a = p.lookup(h);
            if (!a) break;
            used.insert(h);
            q = sys.step(b, q, *a);
            h.append(*a, q);
        }
    }
    PlanTable out;
    out.horizon = p.horizon;
    for (const auto &h : used) out.entries.emplace(h, *p.lookup(h));
    return out;
}

PlanTable plan_from_action_sequence(const PwlSystem &sys, const std::vector<ActionId> &seq, std::size_t horizon) {
    if (seq.size() > horizon) throw ValidationError("action sequence longer than horizon");
    const auto n_actions = static_cast<int>(sys.num_actions());
    for (ActionId a : seq) {
        if (a < 0 || a >= n_actions) throw ValidationError("action sequence id out of range");
    }
    PlanTable out;
    out.horizon = horizon;
    for (BehaviorId b = 0; b < static_cast<BehaviorId>(sys.num_behaviors()); ++b) {
        StateId q = sys.initial;
        HistoryKey h(q);
        for (std::size_t i = 0; i < seq.size(); ++i) {
            if (sys.is_goal(q)) break;
            out.entries.emplace(h, seq[i]);
            q = sys.step(b, q, seq[i]);
            h.append(seq[i], q);
        }
    }
    return out;
}

namespace {

std::unique_ptr<DecisionTreeNode> build_tree(const PwlSystem &sys, const PlanTable &p, const HistoryKey &h,
                                             StateId q, std::vector<BehaviorId> knowledge, std::size_t depth,
                                             std::size_t &count) {
    auto node = std::make_unique<DecisionTreeNode>();
    ++count;
    node->state = q;
    node->knowledge = std::move(knowledge);
    if (sys.is_goal(q)) {
        node->kind = DecisionTreeNode::Kind::Goal;
        return node;
    }
    if (depth == p.horizon) {
        node->kind = DecisionTreeNode::Kind::Horizon;
        return node;
    }
    auto a = p.lookup(h);
    if (!a) {
        node->kind = DecisionTreeNode::Kind::Undefined;
        return node;
    }
    node->kind = DecisionTreeNode::Kind::Internal;
    node->action = *a;
    // Partition the knowledge set by observed successor, ascending.
    std::map<StateId, std::vector<BehaviorId>> groups;
    for (BehaviorId b : node->knowledge) groups[sys.step(b, q, *a)].push_back(b);
    for (auto &[q_next, part] : groups) {
        node->children.emplace_back(q_next,
                                    build_tree(sys, p, h.extended(*a, q_next), q_next, std::move(part), depth + 1, count));
    }
    return node;
}

}  // namespace

DecisionTreeView decision_tree_view(const PwlSystem &sys, const PlanTable &p) {
    validate_plan(sys, p);
    std::vector<BehaviorId> all;
    for (BehaviorId b = 0; b < static_cast<BehaviorId>(sys.num_behaviors()); ++b) all.push_back(b);
    DecisionTreeView view;
    view.root = build_tree(sys, p, HistoryKey(sys.initial), sys.initial, std::move(all), 0, view.node_count);
    return view;
}

}  // namespace pwl
