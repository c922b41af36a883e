#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pwl/plan.hpp"
#include "pwl/system.hpp"

namespace testutil {

// Builds a system from per-behavior flattened transition tables
// (row-major: state * num_actions + action).
inline pwl::PwlSystem make_system(std::size_t num_states, std::size_t num_actions, pwl::StateId initial,
                                  std::vector<pwl::StateId> goals,
                                  std::vector<std::vector<pwl::StateId>> tables) {
    pwl::PwlSystem sys;
    for (std::size_t q = 0; q < num_states; ++q) sys.state_names.push_back("q" + std::to_string(q));
    for (std::size_t a = 0; a < num_actions; ++a) sys.action_names.push_back("a" + std::to_string(a));
    sys.initial = initial;
    std::sort(goals.begin(), goals.end());
    sys.goal_mask.assign(num_states, 0);
    for (pwl::StateId g : goals) sys.goal_mask[static_cast<std::size_t>(g)] = 1;
    sys.goal_states = goals;
    for (std::size_t b = 0; b < tables.size(); ++b) {
        pwl::BehaviorTable bt;
        bt.name = "E" + std::to_string(b + 1);
        bt.next = std::move(tables[b]);
        sys.behaviors.push_back(std::move(bt));
    }
    sys.validate();
    return sys;
}

// Depth-bounded plan existence by plain recursion over observation groups:
// an action wins when every group it induces is winnable one step deeper.
// No memoization or ordering tricks; this is the reference the synthesizer
// is compared against.
inline bool oracle_exists(const pwl::PwlSystem &sys, pwl::StateId q, const std::set<pwl::BehaviorId> &knowledge,
                          std::size_t depth) {
    if (sys.is_goal(q)) return true;
    if (depth == 0) return false;
    for (pwl::ActionId a = 0; a < static_cast<pwl::ActionId>(sys.num_actions()); ++a) {
        std::map<pwl::StateId, std::set<pwl::BehaviorId>> groups;
        for (pwl::BehaviorId b : knowledge) groups[sys.step(b, q, a)].insert(b);
        bool all = true;
        for (const auto &[q_next, part] : groups) {
            if (!oracle_exists(sys, q_next, part, depth - 1)) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

inline bool oracle_exists(const pwl::PwlSystem &sys, std::size_t depth) {
    std::set<pwl::BehaviorId> all;
    for (pwl::BehaviorId b = 0; b < static_cast<pwl::BehaviorId>(sys.num_behaviors()); ++b) all.insert(b);
    return oracle_exists(sys, sys.initial, all, depth);
}

// Rewrites action 0 to hold every state still under every behavior, so
// playing it reveals nothing and moves nothing.
inline pwl::PwlSystem with_identity_action0(pwl::PwlSystem sys) {
    const std::size_t na = sys.num_actions();
    for (auto &bt : sys.behaviors) {
        for (std::size_t q = 0; q < sys.num_states(); ++q) {
            bt.next[q * na] = static_cast<pwl::StateId>(q);
        }
    }
    return sys;
}

// Splices `pads` no-learning loops of action 0 in front of every entry.
// Requires action 0 to self-loop at the initial state under every behavior.
inline pwl::PlanTable pad_with_loops(const pwl::PwlSystem &sys, const pwl::PlanTable &p, std::size_t pads) {
    pwl::PlanTable out;
    out.horizon = p.horizon + pads;
    pwl::HistoryKey prefix(sys.initial);
    for (std::size_t i = 0; i < pads; ++i) {
        out.entries.emplace(prefix, 0);
        prefix.append(0, sys.initial);
    }
    for (const auto &[h, a] : p.entries) {
        pwl::HistoryKey grafted = prefix;
        for (std::size_t i = 0; i < h.num_actions(); ++i) grafted.append(h.action_at(i), h.state_at(i + 1));
        out.entries.emplace(std::move(grafted), a);
    }
    return out;
}

// Longest root-to-leaf action count over the plan's decision tree: an entry
// whose history holds d actions executes its own action as step d + 1.
inline std::size_t max_branch_length(const pwl::PlanTable &p) {
    std::size_t m = 0;
    for (const auto &[h, a] : p.entries) m = std::max(m, h.num_actions() + 1);
    return m;
}

}  // namespace testutil
