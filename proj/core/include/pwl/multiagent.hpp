#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pwl/plan.hpp"
#include "pwl/system.hpp"

namespace pwl {

// One named goal of one agent: a subset of that agent's states.
struct MaGoal {
    std::string name;
    std::vector<char> mask;          // indexed by that agent's StateId
    std::vector<StateId> states;     // sorted ascending
};

struct MaAgent {
    std::vector<std::string> state_names;
    std::vector<StateId> initials;   // candidate initial states, declaration order
    std::vector<MaGoal> goals;       // nonempty

    std::size_t num_states() const { return state_names.size(); }
    StateId state_index(const std::string &name) const;  // throws IndexError
};

// Two agents sharing one action alphabet; the environment advances both
// observable states and the behavior id from the joint action.
struct MultiAgentSystem {
    std::array<MaAgent, 2> agents;
    std::vector<std::string> action_names;
    std::vector<std::string> behavior_names;
    std::vector<BehaviorId> initial_behaviors;  // declaration order, nonempty
    // ((((q1 * |Q2| + q2) * |B| + b) * |A| + a1) * |A| + a2) -> (q1', q2', b')
    std::vector<std::array<int, 3>> gamma;

    std::size_t num_actions() const { return action_names.size(); }
    std::size_t num_behaviors() const { return behavior_names.size(); }

    const std::array<int, 3> &step(StateId q1, StateId q2, BehaviorId b, ActionId a1, ActionId a2) const {
        const std::size_t t2 = agents[1].num_states();
        const std::size_t nb = num_behaviors();
        const std::size_t na = num_actions();
        return gamma[((((static_cast<std::size_t>(q1) * t2 + static_cast<std::size_t>(q2)) * nb +
                        static_cast<std::size_t>(b)) *
                           na +
                       static_cast<std::size_t>(a1)) *
                          na +
                      static_cast<std::size_t>(a2))];
    }

    ActionId action_index(const std::string &name) const;      // throws IndexError
    BehaviorId behavior_index(const std::string &name) const;  // throws IndexError

    void validate() const;  // throws ValidationError
};

// A pair of named plan sets, one per agent, with optional designation of
// which plan targets which goal.
struct MultiAgentPlan {
    struct AgentPlans {
        std::vector<std::string> names;
        std::vector<PlanTable> plans;
        std::map<std::string, std::string> designations;  // goal name -> plan name
    };
    std::array<AgentPlans, 2> agents;
};

struct JointTrace {
    enum class End { Completed, UndefinedEntry };

    // (q1, q2, b, a1, a2) per step, states and behavior taken before acting.
    std::vector<std::array<int, 5>> steps;
    std::array<int, 3> final{};  // (q1, q2, b) after the last step
    End end = End::Completed;
    int undefined_agent = -1;           // 0 or 1 when end == UndefinedEntry
    std::optional<HistoryKey> undefined_history;
    // first_visit[agent][goal index] = earliest step at which the agent's
    // state satisfied that goal (0 = initial state), or -1 if never.
    std::array<std::vector<int>, 2> first_visit;
};

// Runs both plans simultaneously for at most `horizon` joint steps.  Each
// agent acts on its own observed history; a missing plan entry for either
// agent ends the run (agent 1 reported first when both lack one).  Goal
// visits are recorded up to and including the last reached state.
JointTrace joint_simulate(const MultiAgentSystem &ms, const PlanTable &p1, const PlanTable &p2, StateId i1,
                          StateId i2, BehaviorId b0, std::size_t horizon);

// Outcome of ma_verify for one (agent, goal) pair.
struct MaGoalReport {
    int agent = 0;  // 0 or 1
    std::string goal;
    bool satisfied = false;
    std::string plan;  // chosen plan name when satisfied
    // First failing combination of the first candidate plan, when not.
    struct Counterexample {
        std::string candidate_plan;
        std::string opponent_plan;
        std::string i1;
        std::string i2;
        std::string b0;
    };
    std::optional<Counterexample> counterexample;
};

struct MaVerdict {
    std::vector<MaGoalReport> reports;  // agent-major, goal declaration order
    bool satisfactory = false;          // every (agent, goal) pair satisfied
};

// Decides, per agent i and goal g, whether some plan in that agent's set
// reaches g within the horizon against every opponent plan, every pair of
// candidate initial states, and every candidate initial behavior.  A goal
// with a designated plan is checked against that plan only.
MaVerdict ma_verify(const MultiAgentSystem &ms, const MultiAgentPlan &mp, std::size_t horizon);

// Rewrites a multi-goal system into a single-goal one.  Each agent's states
// are paired with a phase tag {start, one observe tag per goal, goal} plus
// one absorbing fail state; behaviors are crossed with both goal families,
// so the behavior id fixes which goal each agent is assigned.  An agent
// must play its own observe action first: the observation reveals the
// assigned goal's tag, any other first action fails the agent, and an
// observe action in any later phase fails it too.  The world components
// freeze on steps where either agent observes or has failed.  The new goal
// of each agent is the set of goal-tagged states, entered the first time
// the assigned goal is satisfied after observing.
MultiAgentSystem reduce_goals(const MultiAgentSystem &ms);

// Exhaustive existence check for satisfactory multi-agent plans at tiny
// scale: enumerates every bounded-depth observation-tree plan per agent,
// keeps those that can reach each goal at all, and scans per-goal choices.
// Horizon is capped at 3; `plan_cap` bounds the per-agent universe.
// Throws SizeLimit when the instance exceeds the caps.
bool ma_brute_force_exists(const MultiAgentSystem &ms, std::size_t horizon, std::size_t plan_cap = 20000);

}  // namespace pwl
