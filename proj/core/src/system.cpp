#include "pwl/system.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "pwl/caps.hpp"
#include "pwl/errors.hpp"

namespace pwl {

StateId PwlSystem::state_index(const std::string &name) const {
    for (std::size_t i = 0; i < state_names.size(); ++i) {
        if (state_names[i] == name) return static_cast<StateId>(i);
    }
    throw IndexError("unknown state: " + name);
}

ActionId PwlSystem::action_index(const std::string &name) const {
    for (std::size_t i = 0; i < action_names.size(); ++i) {
        if (action_names[i] == name) return static_cast<ActionId>(i);
    }
    throw IndexError("unknown action: " + name);
}

void PwlSystem::validate() const {
    if (state_names.empty()) throw ValidationError("empty state set");
    if (state_names.size() > caps().max_states) throw ValidationError("state count exceeds PWL_MAX_STATES");
    if (behaviors.empty()) throw ValidationError("empty behavior set");
    if (behaviors.size() > caps().max_behaviors) throw ValidationError("behavior count exceeds PWL_MAX_BEHAVIORS");

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
    for (const auto &b : behaviors) {
        if (b.name.empty()) throw ValidationError("empty behavior name");
        if (!seen.insert(b.name).second) throw ValidationError("duplicate behavior name: " + b.name);
    }

    if (initial < 0 || static_cast<std::size_t>(initial) >= num_states()) {
        throw ValidationError("initial state out of range");
    }
    if (goal_mask.size() != num_states()) throw ValidationError("goal mask size mismatch");
    for (StateId q : goal_states) {
        if (q < 0 || static_cast<std::size_t>(q) >= num_states() || !goal_mask[static_cast<std::size_t>(q)]) {
            throw ValidationError("goal list inconsistent with goal mask");
        }
    }
    if (!std::is_sorted(goal_states.begin(), goal_states.end())) {
        throw ValidationError("goal list not sorted");
    }
    std::size_t marked = 0;
    for (char m : goal_mask) marked += (m != 0);
    if (marked != goal_states.size()) throw ValidationError("goal list inconsistent with goal mask");

    const std::size_t table_size = num_states() * num_actions();
    for (const auto &b : behaviors) {
        if (b.next.size() != table_size) throw ValidationError("non-total behavior: " + b.name);
        for (StateId q : b.next) {
            if (q < 0 || static_cast<std::size_t>(q) >= num_states()) {
                throw ValidationError("transition target out of range in behavior " + b.name);
            }
        }
    }
}

HistoryKey HistoryKey::from_ids(std::vector<int> ids) {
    if (ids.size() % 2 == 0) throw ValidationError("history must have odd length (states at even positions)");
    HistoryKey h;
    h.ids_ = std::move(ids);
    return h;
}

HistoryKey HistoryKey::extended(ActionId a, StateId q) const {
    HistoryKey h = *this;
    h.append(a, q);
    return h;
}

void HistoryKey::append(ActionId a, StateId q) {
    ids_.push_back(a);
    ids_.push_back(q);
}

void HistoryKey::pop() {
    ids_.pop_back();
    ids_.pop_back();
}

std::vector<BehaviorId> consistent_behaviors(const PwlSystem &sys, const HistoryKey &h) {
    std::vector<BehaviorId> out;
    for (BehaviorId b = 0; b < static_cast<BehaviorId>(sys.num_behaviors()); ++b) {
        bool ok = true;
        for (std::size_t i = 0; i < h.num_actions(); ++i) {
            if (sys.step(b, h.state_at(i), h.action_at(i)) != h.state_at(i + 1)) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(b);
    }
    return out;
}

std::vector<BehaviorId> refine_knowledge(const PwlSystem &sys, const std::vector<BehaviorId> &knowledge,
                                         StateId q, ActionId a, StateId q_next) {
    std::vector<BehaviorId> out;
    out.reserve(knowledge.size());
    for (BehaviorId b : knowledge) {
        if (sys.step(b, q, a) == q_next) out.push_back(b);
    }
    return out;
}

void validate_history(const PwlSystem &sys, const HistoryKey &h) {
    if (h.ids().empty()) throw ValidationError("empty history");
    const auto n_states = static_cast<int>(sys.num_states());
    const auto n_actions = static_cast<int>(sys.num_actions());
    for (std::size_t i = 0; i <= h.num_actions(); ++i) {
        if (h.state_at(i) < 0 || h.state_at(i) >= n_states) throw ValidationError("history state out of range");
    }
    for (std::size_t i = 0; i < h.num_actions(); ++i) {
        if (h.action_at(i) < 0 || h.action_at(i) >= n_actions) throw ValidationError("history action out of range");
    }
    for (std::size_t i = 0; i < h.num_actions(); ++i) {
        bool realizable = false;
        for (BehaviorId b = 0; b < static_cast<BehaviorId>(sys.num_behaviors()) && !realizable; ++b) {
            realizable = sys.step(b, h.state_at(i), h.action_at(i)) == h.state_at(i + 1);
        }
        if (!realizable) throw ValidationError("history transition realizable by no behavior");
    }
}

}  // namespace pwl
