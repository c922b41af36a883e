#include "pwl/multiagent.hpp"

#include <algorithm>
#include <cstdint>
#include <future>
#include <optional>
#include <set>
#include <thread>

#include "pwl/caps.hpp"
#include "pwl/errors.hpp"

namespace pwl {

StateId MaAgent::state_index(const std::string &name) const {
    for (std::size_t i = 0; i < state_names.size(); ++i) {
        if (state_names[i] == name) return static_cast<StateId>(i);
    }
    throw IndexError("unknown state: " + name);
}

ActionId MultiAgentSystem::action_index(const std::string &name) const {
    for (std::size_t i = 0; i < action_names.size(); ++i) {
        if (action_names[i] == name) return static_cast<ActionId>(i);
    }
    throw IndexError("unknown action: " + name);
}

BehaviorId MultiAgentSystem::behavior_index(const std::string &name) const {
    for (std::size_t i = 0; i < behavior_names.size(); ++i) {
        if (behavior_names[i] == name) return static_cast<BehaviorId>(i);
    }
    throw IndexError("unknown behavior: " + name);
}

void MultiAgentSystem::validate() const {
    for (int i = 0; i < 2; ++i) {
        const MaAgent &ag = agents[static_cast<std::size_t>(i)];
        const std::string who = "agent " + std::to_string(i + 1);
        if (ag.state_names.empty()) throw ValidationError(who + ": empty state set");
        if (ag.state_names.size() > caps().max_states) throw ValidationError(who + ": state count exceeds PWL_MAX_STATES");
        std::set<std::string> seen;
        for (const auto &n : ag.state_names) {
            if (n.empty()) throw ValidationError(who + ": empty state name");
            if (n.find('|') != std::string::npos) throw ValidationError(who + ": state name contains reserved '|': " + n);
            if (!seen.insert(n).second) throw ValidationError(who + ": duplicate state name: " + n);
        }
        if (ag.initials.empty()) throw ValidationError(who + ": empty initial state set");
        std::set<StateId> iseen;
        for (StateId q : ag.initials) {
            if (q < 0 || static_cast<std::size_t>(q) >= ag.num_states()) {
                throw ValidationError(who + ": initial state out of range");
            }
            if (!iseen.insert(q).second) throw ValidationError(who + ": duplicate initial state");
        }
        if (ag.goals.empty()) throw ValidationError(who + ": empty goal family");
        std::set<std::string> gseen;
        for (const MaGoal &g : ag.goals) {
            if (g.name.empty()) throw ValidationError(who + ": empty goal name");
            if (!gseen.insert(g.name).second) throw ValidationError(who + ": duplicate goal name: " + g.name);
            if (g.mask.size() != ag.num_states()) throw ValidationError(who + ": goal mask size mismatch");
            if (g.states.empty()) throw ValidationError(who + ": goal " + g.name + " has no states");
            if (!std::is_sorted(g.states.begin(), g.states.end())) throw ValidationError(who + ": goal list not sorted");
            std::size_t marked = 0;
            for (char m : g.mask) marked += (m != 0);
            if (marked != g.states.size()) throw ValidationError(who + ": goal list inconsistent with goal mask");
            for (StateId q : g.states) {
                if (q < 0 || static_cast<std::size_t>(q) >= ag.num_states() || !g.mask[static_cast<std::size_t>(q)]) {
                    throw ValidationError(who + ": goal list inconsistent with goal mask");
                }
            }
        }
    }
    if (action_names.empty()) throw ValidationError("empty action set");
    std::set<std::string> seen;
    for (const auto &n : action_names) {
        if (n.empty()) throw ValidationError("empty action name");
        if (n.find('|') != std::string::npos) throw ValidationError("action name contains reserved '|': " + n);
        if (!seen.insert(n).second) throw ValidationError("duplicate action name: " + n);
    }
    seen.clear();
    if (behavior_names.empty()) throw ValidationError("empty behavior set");
    if (behavior_names.size() > caps().max_behaviors) throw ValidationError("behavior count exceeds PWL_MAX_BEHAVIORS");
    for (const auto &n : behavior_names) {
        if (n.empty()) throw ValidationError("empty behavior name");
        if (n.find('|') != std::string::npos) throw ValidationError("behavior name contains reserved '|': " + n);
        if (!seen.insert(n).second) throw ValidationError("duplicate behavior name: " + n);
    }
    if (initial_behaviors.empty()) throw ValidationError("empty initial behavior set");
    std::set<BehaviorId> bseen;
    for (BehaviorId b : initial_behaviors) {
        if (b < 0 || static_cast<std::size_t>(b) >= num_behaviors()) {
            throw ValidationError("initial behavior out of range");
        }
        if (!bseen.insert(b).second) throw ValidationError("duplicate initial behavior");
    }

    const std::size_t expected =
        agents[0].num_states() * agents[1].num_states() * num_behaviors() * num_actions() * num_actions();
    if (gamma.size() != expected) throw ValidationError("non-total joint transition");
    for (const auto &[q1, q2, b] : gamma) {
        if (q1 < 0 || static_cast<std::size_t>(q1) >= agents[0].num_states()) {
            throw ValidationError("joint transition state out of range");
        }
        if (q2 < 0 || static_cast<std::size_t>(q2) >= agents[1].num_states()) {
            throw ValidationError("joint transition state out of range");
        }
        if (b < 0 || static_cast<std::size_t>(b) >= num_behaviors()) {
            throw ValidationError("joint transition behavior out of range");
        }
    }
}

JointTrace joint_simulate(const MultiAgentSystem &ms, const PlanTable &p1, const PlanTable &p2, StateId i1,
                          StateId i2, BehaviorId b0, std::size_t horizon) {
    if (i1 < 0 || static_cast<std::size_t>(i1) >= ms.agents[0].num_states()) throw IndexError("agent 1 state out of range");
    if (i2 < 0 || static_cast<std::size_t>(i2) >= ms.agents[1].num_states()) throw IndexError("agent 2 state out of range");
    if (b0 < 0 || static_cast<std::size_t>(b0) >= ms.num_behaviors()) throw IndexError("behavior id out of range");

    JointTrace t;
    t.first_visit[0].assign(ms.agents[0].goals.size(), -1);
    t.first_visit[1].assign(ms.agents[1].goals.size(), -1);

    StateId q1 = i1;
    StateId q2 = i2;
    BehaviorId b = b0;
    HistoryKey h1(q1);
    HistoryKey h2(q2);

    auto record = [&](int step) {
        const StateId qs[2] = {q1, q2};
        for (int ag = 0; ag < 2; ++ag) {
            const auto &goals = ms.agents[static_cast<std::size_t>(ag)].goals;
            for (std::size_t g = 0; g < goals.size(); ++g) {
                if (t.first_visit[static_cast<std::size_t>(ag)][g] < 0 &&
                    goals[g].mask[static_cast<std::size_t>(qs[ag])]) {
                    t.first_visit[static_cast<std::size_t>(ag)][g] = step;
                }
            }
        }
    };
    record(0);

    for (std::size_t k = 1; k <= horizon; ++k) {
        auto a1 = p1.lookup(h1);
        if (!a1) {
            t.end = JointTrace::End::UndefinedEntry;
            t.undefined_agent = 0;
            t.undefined_history = h1;
            break;
        }
        auto a2 = p2.lookup(h2);
        if (!a2) {
            t.end = JointTrace::End::UndefinedEntry;
            t.undefined_agent = 1;
            t.undefined_history = h2;
            break;
        }
        t.steps.push_back({q1, q2, b, *a1, *a2});
        const auto &next = ms.step(q1, q2, b, *a1, *a2);
        q1 = next[0];
        q2 = next[1];
        b = next[2];
        h1.append(*a1, q1);
        h2.append(*a2, q2);
        record(static_cast<int>(k));
    }

    t.final = {q1, q2, b};
    return t;
}

namespace {

void validate_agent_plan(const MultiAgentSystem &ms, int agent, const PlanTable &p) {
    const auto n_states = static_cast<int>(ms.agents[static_cast<std::size_t>(agent)].num_states());
    const auto n_actions = static_cast<int>(ms.num_actions());
    for (const auto &[h, a] : p.entries) {
        if (h.ids().empty()) throw ValidationError("empty plan history");
        for (std::size_t i = 0; i <= h.num_actions(); ++i) {
            if (h.state_at(i) < 0 || h.state_at(i) >= n_states) {
                throw ValidationError("plan history references a state outside agent " + std::to_string(agent + 1) +
                                      "'s state set");
            }
        }
        for (std::size_t i = 0; i < h.num_actions(); ++i) {
            if (h.action_at(i) < 0 || h.action_at(i) >= n_actions) {
                throw ValidationError("plan history action out of range");
            }
        }
        if (a < 0 || a >= n_actions) throw ValidationError("plan action out of range");
    }
}

struct FailTuple {
    std::size_t opponent;
    StateId i1;
    StateId i2;
    BehaviorId b0;
};

}  // namespace

MaVerdict ma_verify(const MultiAgentSystem &ms, const MultiAgentPlan &mp, std::size_t horizon) {
    ms.validate();
    for (int ag = 0; ag < 2; ++ag) {
        const auto &side = mp.agents[static_cast<std::size_t>(ag)];
        if (side.plans.empty()) throw ValidationError("agent " + std::to_string(ag + 1) + ": empty plan set");
        if (side.names.size() != side.plans.size()) throw ValidationError("plan name list size mismatch");
        std::set<std::string> seen;
        for (const auto &n : side.names) {
            if (n.empty()) throw ValidationError("empty plan name");
            if (!seen.insert(n).second) throw ValidationError("duplicate plan name: " + n);
        }
        for (const PlanTable &p : side.plans) validate_agent_plan(ms, ag, p);
        const auto &goals = ms.agents[static_cast<std::size_t>(ag)].goals;
        for (const auto &[goal_name, plan_name] : side.designations) {
            if (std::none_of(goals.begin(), goals.end(), [&](const MaGoal &g) { return g.name == goal_name; })) {
                throw ValidationError("designation names unknown goal: " + goal_name);
            }
            if (std::find(side.names.begin(), side.names.end(), plan_name) == side.names.end()) {
                throw ValidationError("designation names unknown plan: " + plan_name);
            }
        }
    }

    MaVerdict verdict;
    verdict.satisfactory = true;

    for (int ag = 0; ag < 2; ++ag) {
        const int opp = 1 - ag;
        const auto &mine = mp.agents[static_cast<std::size_t>(ag)];
        const auto &theirs = mp.agents[static_cast<std::size_t>(opp)];
        const auto &goals = ms.agents[static_cast<std::size_t>(ag)].goals;

        for (std::size_t gi = 0; gi < goals.size(); ++gi) {
            MaGoalReport report;
            report.agent = ag;
            report.goal = goals[gi].name;

            std::vector<std::size_t> candidates;
            auto designated = mine.designations.find(goals[gi].name);
            if (designated != mine.designations.end()) {
                for (std::size_t pi = 0; pi < mine.names.size(); ++pi) {
                    if (mine.names[pi] == designated->second) candidates.push_back(pi);
                }
            } else {
                for (std::size_t pi = 0; pi < mine.plans.size(); ++pi) candidates.push_back(pi);
            }

            // First failing (opponent, i1, i2, b0) tuple in scan order for
            // one opponent plan, or nothing when the candidate beats it.
            auto scan_opponent = [&](const PlanTable &cand, std::size_t oj) -> std::optional<FailTuple> {
                const PlanTable &other = theirs.plans[oj];
                const PlanTable &p1 = ag == 0 ? cand : other;
                const PlanTable &p2 = ag == 0 ? other : cand;
                for (StateId i1 : ms.agents[0].initials) {
                    for (StateId i2 : ms.agents[1].initials) {
                        for (BehaviorId b0 : ms.initial_behaviors) {
                            JointTrace jt = joint_simulate(ms, p1, p2, i1, i2, b0, horizon);
                            if (jt.first_visit[static_cast<std::size_t>(ag)][gi] < 0) {
                                return FailTuple{oj, i1, i2, b0};
                            }
                        }
                    }
                }
                return std::nullopt;
            };

            // Opponent plans are scanned in declaration order; the parallel
            // path chunks that order and keeps the first failure.
            auto first_failure = [&](const PlanTable &cand) -> std::optional<FailTuple> {
                const std::size_t n = theirs.plans.size();
                const unsigned workers = std::thread::hardware_concurrency();
                if (n >= 16 && workers > 1) {
                    const std::size_t chunk = (n + workers - 1) / workers;
                    std::vector<std::future<std::optional<FailTuple>>> parts;
                    for (std::size_t lo = 0; lo < n; lo += chunk) {
                        const std::size_t hi = std::min(n, lo + chunk);
                        parts.push_back(std::async(std::launch::async, [&, lo, hi] {
                            for (std::size_t oj = lo; oj < hi; ++oj) {
                                if (auto f = scan_opponent(cand, oj)) return f;
                            }
                            return std::optional<FailTuple>{};
                        }));
                    }
                    std::optional<FailTuple> merged;
                    for (auto &part : parts) {
                        auto f = part.get();
                        if (f && !merged) merged = f;
                    }
                    return merged;
                }
                for (std::size_t oj = 0; oj < n; ++oj) {
                    if (auto f = scan_opponent(cand, oj)) return f;
                }
                return std::nullopt;
            };

            for (std::size_t ci = 0; ci < candidates.size() && !report.satisfied; ++ci) {
                const std::size_t pi = candidates[ci];
                auto failure = first_failure(mine.plans[pi]);
                if (!failure) {
                    report.satisfied = true;
                    report.plan = mine.names[pi];
                    report.counterexample.reset();
                } else if (ci == 0) {
                    report.counterexample = MaGoalReport::Counterexample{
                        mine.names[pi], theirs.names[failure->opponent],
                        ms.agents[0].state_names[static_cast<std::size_t>(failure->i1)],
                        ms.agents[1].state_names[static_cast<std::size_t>(failure->i2)],
                        ms.behavior_names[static_cast<std::size_t>(failure->b0)]};
                }
            }
            verdict.satisfactory = verdict.satisfactory && report.satisfied;
            verdict.reports.push_back(std::move(report));
        }
    }
    return verdict;
}

namespace {

constexpr int kTagStart = 0;  // observe tags are 1..n; goal tag is n+1

struct ReducedLayout {
    std::array<int, 2> num_goals{};
    std::array<int, 2> fail_state{};
    std::array<ActionId, 2> observe_action{};

    int goal_tag(int agent) const { return num_goals[static_cast<std::size_t>(agent)] + 1; }
    int encode(int agent, StateId q, int tag) const {
        return q * (num_goals[static_cast<std::size_t>(agent)] + 2) + tag;
    }
};

}  // namespace

MultiAgentSystem reduce_goals(const MultiAgentSystem &ms) {
    ms.validate();

    ReducedLayout layout;
    layout.num_goals = {static_cast<int>(ms.agents[0].goals.size()), static_cast<int>(ms.agents[1].goals.size())};
    layout.observe_action = {static_cast<ActionId>(ms.num_actions()), static_cast<ActionId>(ms.num_actions() + 1)};

    MultiAgentSystem out;
    out.action_names = ms.action_names;
    out.action_names.push_back("observe_goal_1");
    out.action_names.push_back("observe_goal_2");

    for (int ag = 0; ag < 2; ++ag) {
        const MaAgent &src = ms.agents[static_cast<std::size_t>(ag)];
        MaAgent &dst = out.agents[static_cast<std::size_t>(ag)];
        const int n = layout.num_goals[static_cast<std::size_t>(ag)];
        for (std::size_t q = 0; q < src.num_states(); ++q) {
            dst.state_names.push_back(src.state_names[q] + "@start");
            for (int j = 0; j < n; ++j) {
                dst.state_names.push_back(src.state_names[q] + "@obs_" + src.goals[static_cast<std::size_t>(j)].name);
            }
            dst.state_names.push_back(src.state_names[q] + "@goal");
        }
        layout.fail_state[static_cast<std::size_t>(ag)] = static_cast<int>(dst.state_names.size());
        dst.state_names.push_back("@fail");
        if (dst.state_names.size() != src.num_states() * static_cast<std::size_t>(n + 2) + 1) {
            throw ValidationError("reduced state count mismatch");
        }
        if (dst.state_names.size() > caps().max_states) {
            throw CapExceeded("reduced state count exceeds PWL_MAX_STATES");
        }

        for (StateId q : src.initials) dst.initials.push_back(layout.encode(ag, q, kTagStart));

        MaGoal goal;
        goal.name = "goal_" + std::to_string(ag + 1);
        goal.mask.assign(dst.state_names.size(), 0);
        for (std::size_t q = 0; q < src.num_states(); ++q) {
            const int id = layout.encode(ag, static_cast<StateId>(q), layout.goal_tag(ag));
            goal.mask[static_cast<std::size_t>(id)] = 1;
            goal.states.push_back(id);
        }
        dst.goals.push_back(std::move(goal));
    }

    const std::size_t behavior_product =
        ms.num_behaviors() * static_cast<std::size_t>(layout.num_goals[0]) * static_cast<std::size_t>(layout.num_goals[1]);
    if (behavior_product > caps().max_behaviors) {
        throw CapExceeded("reduced behavior count exceeds PWL_MAX_BEHAVIORS");
    }
    for (std::size_t b = 0; b < ms.num_behaviors(); ++b) {
        for (int j1 = 0; j1 < layout.num_goals[0]; ++j1) {
            for (int j2 = 0; j2 < layout.num_goals[1]; ++j2) {
                out.behavior_names.push_back(ms.behavior_names[b] + "@" + ms.agents[0].goals[static_cast<std::size_t>(j1)].name +
                                             "@" + ms.agents[1].goals[static_cast<std::size_t>(j2)].name);
            }
        }
    }
    {
        std::set<std::string> unique_check(out.behavior_names.begin(), out.behavior_names.end());
        if (unique_check.size() != out.behavior_names.size()) {
            throw ValidationError("reduced behavior names collide; rename behaviors or goals");
        }
        for (int ag = 0; ag < 2; ++ag) {
            const auto &names = out.agents[static_cast<std::size_t>(ag)].state_names;
            std::set<std::string> sc(names.begin(), names.end());
            if (sc.size() != names.size()) throw ValidationError("reduced state names collide; rename states or goals");
        }
    }
    for (BehaviorId b : ms.initial_behaviors) {
        for (int j1 = 0; j1 < layout.num_goals[0]; ++j1) {
            for (int j2 = 0; j2 < layout.num_goals[1]; ++j2) {
                out.initial_behaviors.push_back(
                    static_cast<BehaviorId>((static_cast<std::size_t>(b) * static_cast<std::size_t>(layout.num_goals[0]) +
                                             static_cast<std::size_t>(j1)) *
                                                static_cast<std::size_t>(layout.num_goals[1]) +
                                            static_cast<std::size_t>(j2)));
            }
        }
    }

    const std::size_t t1 = out.agents[0].num_states();
    const std::size_t t2 = out.agents[1].num_states();
    const std::size_t nb = out.behavior_names.size();
    const std::size_t na = out.action_names.size();
    out.gamma.assign(t1 * t2 * nb * na * na, {0, 0, 0});

    // Decomposes a reduced state into (base state, tag); fail has no base.
    auto decode = [&](int ag, int x, StateId *q, int *tag) {
        if (x == layout.fail_state[static_cast<std::size_t>(ag)]) return false;
        const int width = layout.num_goals[static_cast<std::size_t>(ag)] + 2;
        *q = x / width;
        *tag = x % width;
        return true;
    };

    auto next_for_agent = [&](int ag, int x, ActionId a, StateId q_world_next, int assigned_goal) {
        StateId q = 0;
        int tag = 0;
        if (!decode(ag, x, &q, &tag)) return layout.fail_state[static_cast<std::size_t>(ag)];
        const MaGoal &assigned = ms.agents[static_cast<std::size_t>(ag)].goals[static_cast<std::size_t>(assigned_goal)];
        const bool is_observe = a == layout.observe_action[0] || a == layout.observe_action[1];
        // The goal tag persists over world moves; re-observing forfeits, so
        // the observation happens exactly once per run.
        if (tag == layout.goal_tag(ag)) {
            if (is_observe) return layout.fail_state[static_cast<std::size_t>(ag)];
            return layout.encode(ag, q_world_next, tag);
        }
        if (tag == kTagStart) {
            if (a != layout.observe_action[static_cast<std::size_t>(ag)]) {
                return layout.fail_state[static_cast<std::size_t>(ag)];
            }
            const int seen = 1 + assigned_goal;
            const int promoted = assigned.mask[static_cast<std::size_t>(q_world_next)] ? layout.goal_tag(ag) : seen;
            return layout.encode(ag, q_world_next, promoted);
        }
        // Observe tags: a second observation forfeits; otherwise the tag
        // persists until the assigned goal is reached.
        if (is_observe) return layout.fail_state[static_cast<std::size_t>(ag)];
        if (tag != 1 + assigned_goal) {
            // Tag inconsistent with the behavior's assignment: unreachable
            // by construction, kept total by preserving the tag.
            return layout.encode(ag, q_world_next, tag);
        }
        const int promoted = assigned.mask[static_cast<std::size_t>(q_world_next)] ? layout.goal_tag(ag) : tag;
        return layout.encode(ag, q_world_next, promoted);
    };

    for (std::size_t x1 = 0; x1 < t1; ++x1) {
        for (std::size_t x2 = 0; x2 < t2; ++x2) {
            for (std::size_t bb = 0; bb < nb; ++bb) {
                const std::size_t base_b = bb / (static_cast<std::size_t>(layout.num_goals[0]) *
                                                 static_cast<std::size_t>(layout.num_goals[1]));
                const std::size_t rem = bb % (static_cast<std::size_t>(layout.num_goals[0]) *
                                              static_cast<std::size_t>(layout.num_goals[1]));
                const int j1 = static_cast<int>(rem / static_cast<std::size_t>(layout.num_goals[1]));
                const int j2 = static_cast<int>(rem % static_cast<std::size_t>(layout.num_goals[1]));
                for (std::size_t a1 = 0; a1 < na; ++a1) {
                    for (std::size_t a2 = 0; a2 < na; ++a2) {
                        StateId q1 = 0;
                        StateId q2 = 0;
                        int tag1 = 0;
                        int tag2 = 0;
                        const bool live1 = decode(0, static_cast<int>(x1), &q1, &tag1);
                        const bool live2 = decode(1, static_cast<int>(x2), &q2, &tag2);
                        const bool observing = a1 >= ms.num_actions() || a2 >= ms.num_actions();
                        // The base world holds still whenever an observation
                        // happens or an agent has forfeited.
                        const bool freeze = observing || !live1 || !live2;

                        StateId w1 = q1;
                        StateId w2 = q2;
                        std::size_t wb = base_b;
                        if (!freeze) {
                            const auto &nxt = ms.step(q1, q2, static_cast<BehaviorId>(base_b),
                                                      static_cast<ActionId>(a1), static_cast<ActionId>(a2));
                            w1 = nxt[0];
                            w2 = nxt[1];
                            wb = static_cast<std::size_t>(nxt[2]);
                        }

                        const int y1 = next_for_agent(0, static_cast<int>(x1), static_cast<ActionId>(a1), w1, j1);
                        const int y2 = next_for_agent(1, static_cast<int>(x2), static_cast<ActionId>(a2), w2, j2);
                        const std::size_t yb = (wb * static_cast<std::size_t>(layout.num_goals[0]) +
                                                static_cast<std::size_t>(j1)) *
                                                   static_cast<std::size_t>(layout.num_goals[1]) +
                                               static_cast<std::size_t>(j2);
                        out.gamma[((((x1 * t2 + x2) * nb + bb) * na + a1) * na + a2)] = {
                            y1, y2, static_cast<int>(yb)};
                    }
                }
            }
        }
    }

    out.validate();
    return out;
}

namespace {

// A world configuration an agent considers possible: both observable states
// plus the behavior id.
using Config = std::array<int, 3>;

// Enumerates every plan an agent could usefully follow up to the horizon:
// an action per reachable own-observation history, where reachability is
// taken against an opponent playing arbitrary raw action sequences.  This
// overapproximates the histories reachable against plan-driven opponents,
// so every plan behavior that matters is represented.
class PlanEnumerator {
public:
    PlanEnumerator(const MultiAgentSystem &ms, int agent, std::size_t horizon, std::size_t cap)
        : ms_(ms), agent_(agent), horizon_(horizon), cap_(cap) {}

    std::vector<PlanTable> enumerate() {
        std::vector<std::vector<PlanTable>> per_root;
        for (StateId init : ms_.agents[static_cast<std::size_t>(agent_)].initials) {
            std::vector<Config> configs;
            for (StateId other : ms_.agents[static_cast<std::size_t>(1 - agent_)].initials) {
                for (BehaviorId b : ms_.initial_behaviors) {
                    configs.push_back(agent_ == 0 ? Config{init, other, b} : Config{other, init, b});
                }
            }
            sort_unique(configs);
            per_root.push_back(strategies(HistoryKey(init), configs, 0));
        }
        std::vector<PlanTable> out;
        out.push_back(PlanTable{horizon_, {}});
        for (const auto &root_plans : per_root) {
            std::vector<PlanTable> merged;
            if (out.size() * root_plans.size() > cap_) throw SizeLimit("plan universe exceeds the cap");
            for (const PlanTable &acc : out) {
                for (const PlanTable &add : root_plans) {
                    PlanTable m = acc;
                    m.entries.insert(add.entries.begin(), add.entries.end());
                    merged.push_back(std::move(m));
                }
            }
            out = std::move(merged);
        }
        return out;
    }

private:
    static void sort_unique(std::vector<Config> &v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }

    // All ways to extend the configs one joint step with own action `a`,
    // grouped by the resulting own observation.
    std::map<StateId, std::vector<Config>> expand(const std::vector<Config> &configs, ActionId a) const {
        std::map<StateId, std::vector<Config>> groups;
        for (const Config &c : configs) {
            for (ActionId other = 0; other < static_cast<ActionId>(ms_.num_actions()); ++other) {
                const ActionId a1 = agent_ == 0 ? a : other;
                const ActionId a2 = agent_ == 0 ? other : a;
                const auto &nxt = ms_.step(c[0], c[1], c[2], a1, a2);
                groups[nxt[static_cast<std::size_t>(agent_)]].push_back({nxt[0], nxt[1], nxt[2]});
            }
        }
        for (auto &[obs, v] : groups) sort_unique(v);
        return groups;
    }

    std::vector<PlanTable> strategies(const HistoryKey &h, const std::vector<Config> &configs, std::size_t depth) {
        std::vector<PlanTable> out;
        if (depth == horizon_) {
            out.push_back(PlanTable{horizon_, {}});
            return out;
        }
        for (ActionId a = 0; a < static_cast<ActionId>(ms_.num_actions()); ++a) {
            std::vector<PlanTable> partial;
            partial.push_back(PlanTable{horizon_, {{h, a}}});
            for (const auto &[obs, next_configs] : expand(configs, a)) {
                auto subs = strategies(h.extended(a, obs), next_configs, depth + 1);
                std::vector<PlanTable> merged;
                if (partial.size() * subs.size() > cap_) throw SizeLimit("plan universe exceeds the cap");
                for (const PlanTable &acc : partial) {
                    for (const PlanTable &sub : subs) {
                        PlanTable m = acc;
                        m.entries.insert(sub.entries.begin(), sub.entries.end());
                        merged.push_back(std::move(m));
                    }
                }
                partial = std::move(merged);
            }
            if (out.size() + partial.size() > cap_) throw SizeLimit("plan universe exceeds the cap");
            for (auto &p : partial) out.push_back(std::move(p));
        }
        return out;
    }

    const MultiAgentSystem &ms_;
    int agent_;
    std::size_t horizon_;
    std::size_t cap_;
};

// True when the plan can reach the goal from every (i1, i2, b0) combination
// under at least one choice of opponent raw actions.  A plan failing this
// cannot witness the goal against any opponent plan, so dropping it from
// the search universe is sound.
bool self_capable(const MultiAgentSystem &ms, int agent, const PlanTable &p, std::size_t goal_index,
                  std::size_t horizon) {
    const MaGoal &goal = ms.agents[static_cast<std::size_t>(agent)].goals[goal_index];

    struct Walker {
        const MultiAgentSystem &ms;
        int agent;
        const PlanTable &p;
        const MaGoal &goal;
        std::size_t horizon;

        bool reachable(const HistoryKey &h, const Config &c, std::size_t depth) {
            const StateId own = agent == 0 ? c[0] : c[1];
            if (goal.mask[static_cast<std::size_t>(own)]) return true;
            if (depth == horizon) return false;
            auto a = p.lookup(h);
            if (!a) return false;
            for (ActionId other = 0; other < static_cast<ActionId>(ms.num_actions()); ++other) {
                const ActionId a1 = agent == 0 ? *a : other;
                const ActionId a2 = agent == 0 ? other : *a;
                const auto &nxt = ms.step(c[0], c[1], c[2], a1, a2);
                if (reachable(h.extended(*a, nxt[static_cast<std::size_t>(agent)]), {nxt[0], nxt[1], nxt[2]},
                              depth + 1)) {
                    return true;
                }
            }
            return false;
        }
    };
    Walker w{ms, agent, p, goal, horizon};

    for (StateId own : ms.agents[static_cast<std::size_t>(agent)].initials) {
        for (StateId other : ms.agents[static_cast<std::size_t>(1 - agent)].initials) {
            for (BehaviorId b : ms.initial_behaviors) {
                const Config c = agent == 0 ? Config{own, other, b} : Config{other, own, b};
                if (!w.reachable(HistoryKey(own), c, 0)) return false;
            }
        }
    }
    return true;
}

}  // namespace

bool ma_brute_force_exists(const MultiAgentSystem &ms, std::size_t horizon, std::size_t plan_cap) {
    ms.validate();
    if (horizon > 3) throw SizeLimit("brute-force existence limited to horizon 3");
    if (ms.num_actions() > 8) throw SizeLimit("brute-force existence limited to 8 actions");
    for (int ag = 0; ag < 2; ++ag) {
        if (ms.agents[static_cast<std::size_t>(ag)].num_states() > 64) {
            throw SizeLimit("brute-force existence limited to 64 states per agent");
        }
        if (ms.agents[static_cast<std::size_t>(ag)].goals.size() > 30) {
            throw SizeLimit("brute-force existence limited to 30 goals per agent");
        }
    }

    // A pair of plan sets succeeds exactly when some assignment of one plan
    // per goal does: dropping unused plans from a set only shrinks the
    // opponent quantifier, so singleton-per-goal assignments suffice.
    std::array<std::vector<PlanTable>, 2> universe;
    for (int ag = 0; ag < 2; ++ag) {
        universe[static_cast<std::size_t>(ag)] = PlanEnumerator(ms, ag, horizon, plan_cap).enumerate();
    }

    // capable[ag][g] lists indices of plans that can reach goal g at all;
    // useful[ag] is their sorted union across goals.
    std::array<std::vector<std::vector<std::size_t>>, 2> capable;
    std::array<std::vector<std::size_t>, 2> useful;
    for (int ag = 0; ag < 2; ++ag) {
        const auto &goals = ms.agents[static_cast<std::size_t>(ag)].goals;
        capable[static_cast<std::size_t>(ag)].resize(goals.size());
        std::set<std::size_t> any;
        for (std::size_t pi = 0; pi < universe[static_cast<std::size_t>(ag)].size(); ++pi) {
            for (std::size_t g = 0; g < goals.size(); ++g) {
                if (self_capable(ms, ag, universe[static_cast<std::size_t>(ag)][pi], g, horizon)) {
                    capable[static_cast<std::size_t>(ag)][g].push_back(pi);
                    any.insert(pi);
                }
            }
        }
        for (std::size_t g = 0; g < goals.size(); ++g) {
            if (capable[static_cast<std::size_t>(ag)][g].empty()) return false;
        }
        useful[static_cast<std::size_t>(ag)].assign(any.begin(), any.end());
    }

    const std::size_t n1 = useful[0].size();
    const std::size_t n2 = useful[1].size();
    const std::size_t tuples =
        ms.agents[0].initials.size() * ms.agents[1].initials.size() * ms.initial_behaviors.size();
    if (n1 * n2 * tuples > 4000000) throw SizeLimit("joint simulation count exceeds the cap");

    // beats{1,2}[u1 * n2 + u2]: bitmask of that agent's goals achieved by
    // the plan pair under every (i1, i2, b0) combination.
    std::vector<std::uint32_t> beats1(n1 * n2, 0);
    std::vector<std::uint32_t> beats2(n1 * n2, 0);
    const auto full1 = static_cast<std::uint32_t>((1u << ms.agents[0].goals.size()) - 1);
    const auto full2 = static_cast<std::uint32_t>((1u << ms.agents[1].goals.size()) - 1);

    for (std::size_t u1 = 0; u1 < n1; ++u1) {
        const PlanTable &p1 = universe[0][useful[0][u1]];
        for (std::size_t u2 = 0; u2 < n2; ++u2) {
            const PlanTable &p2 = universe[1][useful[1][u2]];
            std::uint32_t got1 = full1;
            std::uint32_t got2 = full2;
            for (StateId i1 : ms.agents[0].initials) {
                for (StateId i2 : ms.agents[1].initials) {
                    for (BehaviorId b0 : ms.initial_behaviors) {
                        JointTrace jt = joint_simulate(ms, p1, p2, i1, i2, b0, horizon);
                        std::uint32_t run1 = 0;
                        std::uint32_t run2 = 0;
                        for (std::size_t g = 0; g < ms.agents[0].goals.size(); ++g) {
                            if (jt.first_visit[0][g] >= 0) run1 |= 1u << g;
                        }
                        for (std::size_t g = 0; g < ms.agents[1].goals.size(); ++g) {
                            if (jt.first_visit[1][g] >= 0) run2 |= 1u << g;
                        }
                        got1 &= run1;
                        got2 &= run2;
                    }
                }
            }
            beats1[u1 * n2 + u2] = got1;
            beats2[u1 * n2 + u2] = got2;
        }
    }

    // Existence: assignments f1, f2 of one plan per goal such that every
    // pair (f1(g), f2(g')) achieves g for agent 1 and g' for agent 2 under
    // every combination.  Agent 1's goals decouple once f2 is fixed.
    struct Scanner {
        const MultiAgentSystem &ms;
        const std::array<std::vector<std::vector<std::size_t>>, 2> &capable;
        const std::array<std::vector<std::size_t>, 2> &useful;
        const std::vector<std::uint32_t> &beats1;
        const std::vector<std::uint32_t> &beats2;
        std::size_t n2;
        std::vector<std::size_t> f2;

        std::size_t upos(int ag, std::size_t plan_index) const {
            const auto &v = useful[static_cast<std::size_t>(ag)];
            return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), plan_index) - v.begin());
        }

        bool feasible_with_f2() const {
            for (std::size_t g = 0; g < ms.agents[0].goals.size(); ++g) {
                bool found = false;
                for (std::size_t plan_index : capable[0][g]) {
                    const std::size_t u1 = upos(0, plan_index);
                    bool ok = true;
                    for (std::size_t g2 = 0; g2 < f2.size(); ++g2) {
                        const std::uint32_t b1 = beats1[u1 * n2 + f2[g2]];
                        const std::uint32_t b2 = beats2[u1 * n2 + f2[g2]];
                        if ((b1 & (1u << g)) == 0 || (b2 & (1u << g2)) == 0) {
                            ok = false;
                            break;
                        }
                    }
                    if (ok) {
                        found = true;
                        break;
                    }
                }
                if (!found) return false;
            }
            return true;
        }

        bool scan(std::size_t g2) {
            if (g2 == ms.agents[1].goals.size()) return feasible_with_f2();
            for (std::size_t plan_index : capable[1][g2]) {
                f2[g2] = upos(1, plan_index);
                if (scan(g2 + 1)) return true;
            }
            return false;
        }
    };

    Scanner scanner{ms,     capable, useful, beats1, beats2,
                    n2,     std::vector<std::size_t>(ms.agents[1].goals.size(), 0)};
    return scanner.scan(0);
}

}  // namespace pwl
