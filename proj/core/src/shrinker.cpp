#include "pwl/shrinker.hpp"

#include <utility>

#include "pwl/errors.hpp"
#include "pwl/verifier.hpp"

namespace pwl {

namespace {

bool same_label(const DecisionTreeNode &a, const DecisionTreeNode &b) {
    return a.state == b.state && a.knowledge == b.knowledge;
}

// Finds, in preorder, the first node with an ancestor carrying the same
// (state, knowledge) label.  Equal labels mean the knowledge set never
// changed in between, so the segment is a single-child chain; the repeat is
// extended down that chain as far as the label persists.  Returns true and
// sets (ancestor, replacement) when a splice opportunity exists.
bool find_splice(DecisionTreeNode *node, std::vector<DecisionTreeNode *> &path,
                 DecisionTreeNode **ancestor, DecisionTreeNode **replacement) {
    for (DecisionTreeNode *anc : path) {
        if (same_label(*anc, *node)) {
            DecisionTreeNode *deepest = node;
            while (deepest->children.size() == 1 && same_label(*deepest->children[0].second, *anc)) {
                deepest = deepest->children[0].second.get();
            }
            *ancestor = anc;
            *replacement = deepest;
            return true;
        }
    }
    path.push_back(node);
    for (auto &[q_next, child] : node->children) {
        if (find_splice(child.get(), path, ancestor, replacement)) return true;
    }
    path.pop_back();
    return false;
}

void detach_and_replace(DecisionTreeNode *ancestor, DecisionTreeNode *replacement) {
    // Move the replacement's content into the ancestor node.  The spliced
    // segment lies strictly between them, so the moved-from subtree is not
    // reachable from the moved-to node and the move is safe.
    DecisionTreeNode taken = std::move(*replacement);
    *ancestor = std::move(taken);
}

void collect_entries(const DecisionTreeNode &node, const HistoryKey &h, PlanTable &out) {
    if (node.kind != DecisionTreeNode::Kind::Internal) return;
    out.entries.emplace(h, *node.action);
    for (const auto &[q_next, child] : node.children) {
        collect_entries(*child, h.extended(*node.action, q_next), out);
    }
}

}  // namespace

PlanTable shrink(const PwlSystem &sys, const PlanTable &p) {
    Verdict before = verify(sys, p, p.horizon, 1.0);
    if (!before.satisfactory) throw NotSatisfactory("plan is not satisfactory at its own horizon");

    DecisionTreeView view = decision_tree_view(sys, p);
    for (;;) {
        std::vector<DecisionTreeNode *> path;
        DecisionTreeNode *ancestor = nullptr;
        DecisionTreeNode *replacement = nullptr;
        if (!find_splice(view.root.get(), path, &ancestor, &replacement)) break;
        detach_and_replace(ancestor, replacement);
    }

    PlanTable out;
    out.horizon = sys.num_behaviors() * sys.num_states();
    collect_entries(*view.root, HistoryKey(sys.initial), out);
    return out;
}

}  // namespace pwl
