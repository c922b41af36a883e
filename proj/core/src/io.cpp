#include "pwl/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pwl/errors.hpp"

namespace pwl {

namespace {

using nlohmann::json;

json parse_json(const std::string &text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw ParseError(e.what());
    }
}

// json::exception covers missing fields and type mismatches.
template <typename F>
auto field_errors_as_parse(F &&f) -> decltype(f()) {
    try {
        return f();
    } catch (const json::exception &e) {
        throw ParseError(e.what());
    }
}

std::vector<std::string> string_array(const json &j, const char *what) {
    if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
    std::vector<std::string> out;
    for (const auto &el : j) {
        if (!el.is_string()) throw ParseError(std::string(what) + " must contain strings");
        out.push_back(el.get<std::string>());
    }
    return out;
}

int index_of(const std::vector<std::string> &names, const std::string &name, const char *what) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return static_cast<int>(i);
    }
    throw ValidationError(std::string("unknown ") + what + ": " + name);
}

std::vector<std::string> split_key(const std::string &key, std::size_t parts) {
    std::vector<std::string> out;
    std::size_t begin = 0;
    while (true) {
        const std::size_t bar = key.find('|', begin);
        if (bar == std::string::npos) {
            out.push_back(key.substr(begin));
            break;
        }
        out.push_back(key.substr(begin, bar - begin));
        begin = bar + 1;
    }
    if (out.size() != parts) {
        throw ParseError("key '" + key + "' must have " + std::to_string(parts) + " '|'-separated parts");
    }
    return out;
}

std::size_t nonneg_integer(const json &j, const char *what) {
    if (!j.is_number_integer() || j.get<long long>() < 0) {
        throw ParseError(std::string(what) + " must be a non-negative integer");
    }
    return static_cast<std::size_t>(j.get<long long>());
}

// Resolves goal names against states: returns (mask, sorted ids).
std::pair<std::vector<char>, std::vector<StateId>> resolve_goal(const std::vector<std::string> &state_names,
                                                                const std::vector<std::string> &goal_names) {
    std::vector<char> mask(state_names.size(), 0);
    std::vector<StateId> ids;
    for (const auto &g : goal_names) {
        const StateId q = index_of(state_names, g, "state");
        if (mask[static_cast<std::size_t>(q)]) throw ValidationError("duplicate goal state: " + g);
        mask[static_cast<std::size_t>(q)] = 1;
        ids.push_back(q);
    }
    std::sort(ids.begin(), ids.end());
    return {std::move(mask), std::move(ids)};
}

json history_to_json(const std::vector<std::string> &state_names, const std::vector<std::string> &action_names,
                     const HistoryKey &h) {
    json arr = json::array();
    for (std::size_t i = 0; i < h.ids().size(); ++i) {
        const int id = h.ids()[i];
        if (i % 2 == 0) {
            arr.push_back(state_names[static_cast<std::size_t>(id)]);
        } else {
            arr.push_back(action_names[static_cast<std::size_t>(id)]);
        }
    }
    return arr;
}

HistoryKey history_from_json(const std::vector<std::string> &state_names,
                             const std::vector<std::string> &action_names, const json &arr) {
    if (!arr.is_array() || arr.empty() || arr.size() % 2 == 0) {
        throw ParseError("history must be an odd-length array of names");
    }
    std::vector<int> ids;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_string()) throw ParseError("history must contain strings");
        const std::string name = arr[i].get<std::string>();
        ids.push_back(i % 2 == 0 ? index_of(state_names, name, "state") : index_of(action_names, name, "action"));
    }
    return HistoryKey::from_ids(std::move(ids));
}

PlanTable plan_from_json(const std::vector<std::string> &state_names,
                         const std::vector<std::string> &action_names, const json &j) {
    return field_errors_as_parse([&] {
        PlanTable p;
        p.horizon = nonneg_integer(j.at("horizon"), "horizon");
        const json &entries = j.at("entries");
        if (!entries.is_array()) throw ParseError("entries must be an array");
        for (const auto &entry : entries) {
            HistoryKey h = history_from_json(state_names, action_names, entry.at("history"));
            const json &aj = entry.at("action");
            if (!aj.is_string()) throw ParseError("action must be a string");
            const ActionId a = index_of(action_names, aj.get<std::string>(), "action");
            if (!p.entries.emplace(std::move(h), a).second) {
                throw ValidationError("duplicate plan entry");
            }
        }
        return p;
    });
}

json plan_to_json_value(const std::vector<std::string> &state_names,
                        const std::vector<std::string> &action_names, const PlanTable &p) {
    json entries = json::array();
    for (const auto &[h, a] : p.entries) {
        json entry;
        entry["history"] = history_to_json(state_names, action_names, h);
        entry["action"] = action_names[static_cast<std::size_t>(a)];
        entries.push_back(std::move(entry));
    }
    json out;
    out["horizon"] = p.horizon;
    out["entries"] = std::move(entries);
    return out;
}

std::string dump(const json &j) { return j.dump(2) + "\n"; }

const char *outcome_name(Outcome o) {
    switch (o) {
        case Outcome::GoalReached: return "goal_reached";
        case Outcome::UndefinedEntry: return "undefined_entry";
        default: return "horizon_exhausted";
    }
}

json trace_to_json_value(const std::vector<std::string> &state_names,
                         const std::vector<std::string> &action_names, const std::string &behavior_label,
                         const Trace &t) {
    json steps = json::array();
    for (const auto &[q, a] : t.steps) {
        json step;
        step["state"] = state_names[static_cast<std::size_t>(q)];
        step["action"] = action_names[static_cast<std::size_t>(a)];
        steps.push_back(std::move(step));
    }
    json out;
    out["behavior"] = behavior_label;
    out["steps"] = std::move(steps);
    out["final_state"] = state_names[static_cast<std::size_t>(t.final_state)];
    out["outcome"] = outcome_name(t.outcome);
    out["goal_step"] = t.goal_step;
    if (t.undefined_history) {
        out["undefined_history"] = history_to_json(state_names, action_names, *t.undefined_history);
    }
    return out;
}

json verdict_to_json_value(const std::vector<std::string> &state_names,
                           const std::vector<std::string> &action_names,
                           const std::vector<std::string> &behavior_labels, const Verdict &v) {
    json traces = json::array();
    for (std::size_t i = 0; i < v.traces.size(); ++i) {
        traces.push_back(trace_to_json_value(state_names, action_names, behavior_labels[i], v.traces[i]));
    }
    json out;
    out["traces"] = std::move(traces);
    out["satisfied_count"] = v.satisfied_count;
    out["satisfied_fraction"] = v.satisfied_fraction;
    out["threshold"] = v.threshold;
    out["satisfactory"] = v.satisfactory;
    out["step_applications"] = v.step_applications;
    return out;
}

}  // namespace

std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write file: " + path);
    out << text;
    if (!out) throw ParseError("cannot write file: " + path);
}

PwlSystem load_system(const std::string &text) {
    const json j = parse_json(text);
    return field_errors_as_parse([&] {
        PwlSystem sys;
        sys.state_names = string_array(j.at("states"), "states");
        sys.action_names = string_array(j.at("actions"), "actions");
        const json &init = j.at("initial");
        if (!init.is_string()) throw ParseError("initial must be a string");
        sys.initial = index_of(sys.state_names, init.get<std::string>(), "state");
        auto [mask, ids] = resolve_goal(sys.state_names, string_array(j.at("goal"), "goal"));
        sys.goal_mask = std::move(mask);
        sys.goal_states = std::move(ids);

        const json &behaviors = j.at("behaviors");
        if (!behaviors.is_array()) throw ParseError("behaviors must be an array");
        for (const auto &bj : behaviors) {
            BehaviorTable bt;
            const json &name = bj.at("name");
            if (!name.is_string()) throw ParseError("behavior name must be a string");
            bt.name = name.get<std::string>();
            bt.next.assign(sys.num_states() * sys.num_actions(), -1);
            const json &table = bj.at("table");
            if (!table.is_object()) throw ParseError("behavior table must be an object");
            for (const auto &[key, value] : table.items()) {
                const auto parts = split_key(key, 2);
                const StateId q = index_of(sys.state_names, parts[0], "state");
                const ActionId a = index_of(sys.action_names, parts[1], "action");
                if (!value.is_string()) throw ParseError("transition target must be a string");
                bt.next[static_cast<std::size_t>(q) * sys.num_actions() + static_cast<std::size_t>(a)] =
                    index_of(sys.state_names, value.get<std::string>(), "state");
            }
            for (StateId target : bt.next) {
                if (target < 0) throw ValidationError("non-total behavior: " + bt.name);
            }
            sys.behaviors.push_back(std::move(bt));
        }
        sys.validate();
        return sys;
    });
}

std::string system_to_json(const PwlSystem &sys) {
    json out;
    out["states"] = sys.state_names;
    out["actions"] = sys.action_names;
    out["initial"] = sys.state_names[static_cast<std::size_t>(sys.initial)];
    json goal = json::array();
    for (StateId q : sys.goal_states) goal.push_back(sys.state_names[static_cast<std::size_t>(q)]);
    out["goal"] = std::move(goal);
    json behaviors = json::array();
    for (const auto &bt : sys.behaviors) {
        json table;
        for (std::size_t q = 0; q < sys.num_states(); ++q) {
            for (std::size_t a = 0; a < sys.num_actions(); ++a) {
                table[sys.state_names[q] + "|" + sys.action_names[a]] =
                    sys.state_names[static_cast<std::size_t>(bt.next[q * sys.num_actions() + a])];
            }
        }
        json bj;
        bj["name"] = bt.name;
        bj["table"] = std::move(table);
        behaviors.push_back(std::move(bj));
    }
    out["behaviors"] = std::move(behaviors);
    return dump(out);
}

PlanTable load_plan(const std::vector<std::string> &state_names, const std::vector<std::string> &action_names,
                    const std::string &text) {
    return plan_from_json(state_names, action_names, parse_json(text));
}

std::string plan_to_json(const std::vector<std::string> &state_names,
                         const std::vector<std::string> &action_names, const PlanTable &p) {
    return dump(plan_to_json_value(state_names, action_names, p));
}

ExtendedSystem load_extended(const std::string &text) {
    const json j = parse_json(text);
    return field_errors_as_parse([&] {
        ExtendedSystem es;
        es.state_names = string_array(j.at("states"), "states");
        es.action_names = string_array(j.at("actions"), "actions");
        es.behavior_names = string_array(j.at("behavior_ids"), "behavior_ids");
        const json &init = j.at("initial");
        if (!init.is_string()) throw ParseError("initial must be a string");
        es.initial = index_of(es.state_names, init.get<std::string>(), "state");
        for (const auto &name : string_array(j.at("initial_candidates"), "initial_candidates")) {
            es.initial_candidates.push_back(index_of(es.behavior_names, name, "behavior"));
        }
        auto [mask, ids] = resolve_goal(es.state_names, string_array(j.at("goal"), "goal"));
        es.goal_mask = std::move(mask);
        es.goal_states = std::move(ids);

        es.gamma.assign(es.num_states() * es.num_behaviors() * es.num_actions(), {-1, -1});
        const json &gamma = j.at("gamma");
        if (!gamma.is_object()) throw ParseError("gamma must be an object");
        for (const auto &[key, value] : gamma.items()) {
            const auto parts = split_key(key, 3);
            const StateId q = index_of(es.state_names, parts[0], "state");
            const BehaviorId b = index_of(es.behavior_names, parts[1], "behavior");
            const ActionId a = index_of(es.action_names, parts[2], "action");
            if (!value.is_string()) throw ParseError("transition target must be a string");
            const auto target = split_key(value.get<std::string>(), 2);
            es.gamma[(static_cast<std::size_t>(q) * es.num_behaviors() + static_cast<std::size_t>(b)) *
                         es.num_actions() +
                     static_cast<std::size_t>(a)] = {index_of(es.state_names, target[0], "state"),
                                                     index_of(es.behavior_names, target[1], "behavior")};
        }
        for (const auto &[q, b] : es.gamma) {
            if (q < 0 || b < 0) throw ValidationError("non-total global transition");
        }
        es.validate();
        return es;
    });
}

std::string extended_to_json(const ExtendedSystem &es) {
    json out;
    out["states"] = es.state_names;
    out["actions"] = es.action_names;
    out["behavior_ids"] = es.behavior_names;
    out["initial"] = es.state_names[static_cast<std::size_t>(es.initial)];
    json candidates = json::array();
    for (BehaviorId b : es.initial_candidates) candidates.push_back(es.behavior_names[static_cast<std::size_t>(b)]);
    out["initial_candidates"] = std::move(candidates);
    json goal = json::array();
    for (StateId q : es.goal_states) goal.push_back(es.state_names[static_cast<std::size_t>(q)]);
    out["goal"] = std::move(goal);
    json gamma;
    for (std::size_t q = 0; q < es.num_states(); ++q) {
        for (std::size_t b = 0; b < es.num_behaviors(); ++b) {
            for (std::size_t a = 0; a < es.num_actions(); ++a) {
                const auto &[qn, bn] = es.gamma[(q * es.num_behaviors() + b) * es.num_actions() + a];
                gamma[es.state_names[q] + "|" + es.behavior_names[b] + "|" + es.action_names[a]] =
                    es.state_names[static_cast<std::size_t>(qn)] + "|" +
                    es.behavior_names[static_cast<std::size_t>(bn)];
            }
        }
    }
    out["gamma"] = std::move(gamma);
    return dump(out);
}

namespace {

MaAgent agent_from_json(const json &j, const char *which) {
    MaAgent ag;
    ag.state_names = string_array(j.at("states"), "states");
    for (const auto &name : string_array(j.at("initials"), "initials")) {
        ag.initials.push_back(index_of(ag.state_names, name, "state"));
    }
    const json &goals = j.at("goals");
    if (!goals.is_array()) throw ParseError(std::string(which) + " goals must be an array");
    for (const auto &gj : goals) {
        MaGoal goal;
        const json &name = gj.at("name");
        if (!name.is_string()) throw ParseError("goal name must be a string");
        goal.name = name.get<std::string>();
        auto [mask, ids] = resolve_goal(ag.state_names, string_array(gj.at("states"), "goal states"));
        goal.mask = std::move(mask);
        goal.states = std::move(ids);
        ag.goals.push_back(std::move(goal));
    }
    return ag;
}

json agent_to_json(const MaAgent &ag) {
    json out;
    out["states"] = ag.state_names;
    json initials = json::array();
    for (StateId q : ag.initials) initials.push_back(ag.state_names[static_cast<std::size_t>(q)]);
    out["initials"] = std::move(initials);
    json goals = json::array();
    for (const MaGoal &g : ag.goals) {
        json gj;
        gj["name"] = g.name;
        json states = json::array();
        for (StateId q : g.states) states.push_back(ag.state_names[static_cast<std::size_t>(q)]);
        gj["states"] = std::move(states);
        goals.push_back(std::move(gj));
    }
    out["goals"] = std::move(goals);
    return out;
}

}  // namespace

MultiAgentSystem load_ma(const std::string &text) {
    const json j = parse_json(text);
    return field_errors_as_parse([&] {
        MultiAgentSystem ms;
        ms.agents[0] = agent_from_json(j.at("agent1"), "agent1");
        ms.agents[1] = agent_from_json(j.at("agent2"), "agent2");
        ms.action_names = string_array(j.at("actions"), "actions");
        ms.behavior_names = string_array(j.at("behavior_ids"), "behavior_ids");
        for (const auto &name : string_array(j.at("initial_behaviors"), "initial_behaviors")) {
            ms.initial_behaviors.push_back(index_of(ms.behavior_names, name, "behavior"));
        }

        const std::size_t t2 = ms.agents[1].num_states();
        const std::size_t nb = ms.num_behaviors();
        const std::size_t na = ms.num_actions();
        ms.gamma.assign(ms.agents[0].num_states() * t2 * nb * na * na, {-1, -1, -1});
        const json &gamma = j.at("gamma_m");
        if (!gamma.is_object()) throw ParseError("gamma_m must be an object");
        for (const auto &[key, value] : gamma.items()) {
            const auto parts = split_key(key, 5);
            const StateId q1 = index_of(ms.agents[0].state_names, parts[0], "state");
            const StateId q2 = index_of(ms.agents[1].state_names, parts[1], "state");
            const BehaviorId b = index_of(ms.behavior_names, parts[2], "behavior");
            const ActionId a1 = index_of(ms.action_names, parts[3], "action");
            const ActionId a2 = index_of(ms.action_names, parts[4], "action");
            if (!value.is_string()) throw ParseError("transition target must be a string");
            const auto target = split_key(value.get<std::string>(), 3);
            ms.gamma[((((static_cast<std::size_t>(q1) * t2 + static_cast<std::size_t>(q2)) * nb +
                        static_cast<std::size_t>(b)) *
                           na +
                       static_cast<std::size_t>(a1)) *
                          na +
                      static_cast<std::size_t>(a2))] = {index_of(ms.agents[0].state_names, target[0], "state"),
                                                        index_of(ms.agents[1].state_names, target[1], "state"),
                                                        index_of(ms.behavior_names, target[2], "behavior")};
        }
        for (const auto &[q1, q2, b] : ms.gamma) {
            if (q1 < 0 || q2 < 0 || b < 0) throw ValidationError("non-total joint transition");
        }
        ms.validate();
        return ms;
    });
}

std::string ma_to_json(const MultiAgentSystem &ms) {
    json out;
    out["agent1"] = agent_to_json(ms.agents[0]);
    out["agent2"] = agent_to_json(ms.agents[1]);
    out["actions"] = ms.action_names;
    out["behavior_ids"] = ms.behavior_names;
    json initials = json::array();
    for (BehaviorId b : ms.initial_behaviors) initials.push_back(ms.behavior_names[static_cast<std::size_t>(b)]);
    out["initial_behaviors"] = std::move(initials);

    const std::size_t t2 = ms.agents[1].num_states();
    const std::size_t nb = ms.num_behaviors();
    const std::size_t na = ms.num_actions();
    json gamma;
    for (std::size_t q1 = 0; q1 < ms.agents[0].num_states(); ++q1) {
        for (std::size_t q2 = 0; q2 < t2; ++q2) {
            for (std::size_t b = 0; b < nb; ++b) {
                for (std::size_t a1 = 0; a1 < na; ++a1) {
                    for (std::size_t a2 = 0; a2 < na; ++a2) {
                        const auto &next = ms.gamma[((((q1 * t2 + q2) * nb + b) * na + a1) * na + a2)];
                        gamma[ms.agents[0].state_names[q1] + "|" + ms.agents[1].state_names[q2] + "|" +
                              ms.behavior_names[b] + "|" + ms.action_names[a1] + "|" + ms.action_names[a2]] =
                            ms.agents[0].state_names[static_cast<std::size_t>(next[0])] + "|" +
                            ms.agents[1].state_names[static_cast<std::size_t>(next[1])] + "|" +
                            ms.behavior_names[static_cast<std::size_t>(next[2])];
                    }
                }
            }
        }
    }
    out["gamma_m"] = std::move(gamma);
    return dump(out);
}

MultiAgentPlan load_ma_plan(const MultiAgentSystem &ms, const std::string &text) {
    const json j = parse_json(text);
    return field_errors_as_parse([&] {
        MultiAgentPlan mp;
        const char *keys[2] = {"agent1", "agent2"};
        for (int ag = 0; ag < 2; ++ag) {
            const json &side = j.at(keys[ag]);
            auto &dst = mp.agents[static_cast<std::size_t>(ag)];
            const json &plans = side.at("plans");
            if (!plans.is_array()) throw ParseError("plans must be an array");
            for (const auto &pj : plans) {
                const json &name = pj.at("name");
                if (!name.is_string()) throw ParseError("plan name must be a string");
                dst.names.push_back(name.get<std::string>());
                dst.plans.push_back(plan_from_json(ms.agents[static_cast<std::size_t>(ag)].state_names,
                                                   ms.action_names, pj));
            }
            if (side.contains("designations")) {
                const json &des = side.at("designations");
                if (!des.is_object()) throw ParseError("designations must be an object");
                for (const auto &[goal, plan] : des.items()) {
                    if (!plan.is_string()) throw ParseError("designation must name a plan");
                    dst.designations[goal] = plan.get<std::string>();
                }
            }
        }
        return mp;
    });
}

std::string ma_plan_to_json(const MultiAgentSystem &ms, const MultiAgentPlan &mp) {
    json out;
    const char *keys[2] = {"agent1", "agent2"};
    for (int ag = 0; ag < 2; ++ag) {
        const auto &side = mp.agents[static_cast<std::size_t>(ag)];
        json plans = json::array();
        for (std::size_t i = 0; i < side.plans.size(); ++i) {
            json pj = plan_to_json_value(ms.agents[static_cast<std::size_t>(ag)].state_names, ms.action_names,
                                         side.plans[i]);
            pj["name"] = side.names[i];
            plans.push_back(std::move(pj));
        }
        json sj;
        sj["plans"] = std::move(plans);
        if (!side.designations.empty()) {
            json des;
            for (const auto &[goal, plan] : side.designations) des[goal] = plan;
            sj["designations"] = std::move(des);
        }
        out[keys[ag]] = std::move(sj);
    }
    return dump(out);
}

Cnf3 load_dimacs(const std::string &text) {
    Cnf3 cnf;
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    long long declared_clauses = 0;
    std::vector<int> pending;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c') continue;
        if (line[0] == '%') break;
        std::istringstream ls(line);
        if (line[0] == 'p') {
            if (have_header) throw ParseError("duplicate DIMACS header");
            std::string p, fmt;
            long long nv = 0;
            if (!(ls >> p >> fmt >> nv >> declared_clauses) || fmt != "cnf") {
                throw ParseError("malformed DIMACS header");
            }
            if (nv < 1 || declared_clauses < 0) throw ParseError("malformed DIMACS header");
            cnf.num_vars = static_cast<int>(nv);
            have_header = true;
            continue;
        }
        if (!have_header) throw ParseError("DIMACS clauses before header");
        long long lit = 0;
        while (ls >> lit) {
            if (lit == 0) {
                if (pending.size() != 3) throw ParseError("clause must have exactly 3 literals");
                Clause3 c;
                for (int i = 0; i < 3; ++i) c.lits[static_cast<std::size_t>(i)] = {std::abs(pending[static_cast<std::size_t>(i)]), pending[static_cast<std::size_t>(i)] > 0};
                cnf.clauses.push_back(c);
                pending.clear();
            } else {
                pending.push_back(static_cast<int>(lit));
            }
        }
        if (ls.fail() && !ls.eof()) throw ParseError("malformed DIMACS literal");
    }
    if (!have_header) throw ParseError("missing DIMACS header");
    if (!pending.empty()) throw ParseError("unterminated clause");
    if (static_cast<long long>(cnf.clauses.size()) != declared_clauses) {
        throw ParseError("clause count does not match header");
    }
    cnf.validate();
    return cnf;
}

std::string dimacs_from_cnf(const Cnf3 &phi) {
    std::ostringstream out;
    out << "p cnf " << phi.num_vars << " " << phi.clauses.size() << "\n";
    for (const auto &c : phi.clauses) {
        for (const auto &l : c.lits) out << (l.positive ? l.var : -l.var) << " ";
        out << "0\n";
    }
    return out.str();
}

TransportGraph load_transport_graph(const std::string &text) {
    const json j = parse_json(text);
    return field_errors_as_parse([&] {
        TransportGraph g;
        g.vertices = string_array(j.at("vertices"), "vertices");
        if (j.contains("edges")) {
            const json &edges = j.at("edges");
            if (!edges.is_array()) throw ParseError("edges must be an array");
            for (const auto &ej : edges) {
                TransportEdge e;
                e.label = ej.at("label").get<std::string>();
                e.from = ej.at("from").get<std::string>();
                e.to = ej.at("to").get<std::string>();
                g.edges.push_back(std::move(e));
            }
        }
        if (j.contains("uncertain")) {
            const json &unc = j.at("uncertain");
            if (!unc.is_array()) throw ParseError("uncertain must be an array");
            for (const auto &ej : unc) {
                UncertainEdge e;
                e.label = ej.at("label").get<std::string>();
                e.from = ej.at("from").get<std::string>();
                e.endpoints = string_array(ej.at("endpoints"), "endpoints");
                g.uncertain.push_back(std::move(e));
            }
        }
        g.start = j.at("start").get<std::string>();
        g.target = j.at("target").get<std::string>();
        return g;
    });
}

std::string trace_to_json(const std::vector<std::string> &state_names,
                          const std::vector<std::string> &action_names, const std::string &behavior_label,
                          const Trace &t) {
    return dump(trace_to_json_value(state_names, action_names, behavior_label, t));
}

std::string verdict_to_json(const PwlSystem &sys, const Verdict &v) {
    std::vector<std::string> labels;
    for (const auto &bt : sys.behaviors) labels.push_back(bt.name);
    return dump(verdict_to_json_value(sys.state_names, sys.action_names, labels, v));
}

std::string ext_verdict_to_json(const ExtendedSystem &es, const Verdict &v) {
    std::vector<std::string> labels;
    for (const Trace &t : v.traces) labels.push_back(es.behavior_names[static_cast<std::size_t>(t.behavior)]);
    return dump(verdict_to_json_value(es.state_names, es.action_names, labels, v));
}

std::string ma_verdict_to_json(const MaVerdict &v) {
    json reports = json::array();
    for (const auto &r : v.reports) {
        json rj;
        rj["agent"] = r.agent + 1;
        rj["goal"] = r.goal;
        rj["satisfied"] = r.satisfied;
        if (r.satisfied) rj["plan"] = r.plan;
        if (r.counterexample) {
            json cj;
            cj["candidate_plan"] = r.counterexample->candidate_plan;
            cj["opponent_plan"] = r.counterexample->opponent_plan;
            cj["initial_1"] = r.counterexample->i1;
            cj["initial_2"] = r.counterexample->i2;
            cj["behavior"] = r.counterexample->b0;
            rj["counterexample"] = std::move(cj);
        }
        reports.push_back(std::move(rj));
    }
    json out;
    out["reports"] = std::move(reports);
    out["satisfactory"] = v.satisfactory;
    return dump(out);
}

Assignment parse_assignment(const std::string &text) {
    Assignment s;
    if (text.empty()) throw ParseError("empty assignment");
    if (text.find(',') != std::string::npos) {
        std::istringstream in(text);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            if (tok == "0") {
                s.push_back(0);
            } else if (tok == "1") {
                s.push_back(1);
            } else {
                throw ParseError("assignment values must be 0 or 1");
            }
        }
        return s;
    }
    for (char c : text) {
        if (c == '0') {
            s.push_back(0);
        } else if (c == '1') {
            s.push_back(1);
        } else {
            throw ParseError("assignment values must be 0 or 1");
        }
    }
    return s;
}

std::string assignment_to_json(const Assignment &s) {
    json out;
    out["assignment"] = s;
    return dump(out);
}

SystemKind detect_system_kind(const std::string &text) {
    const json j = parse_json(text);
    if (!j.is_object()) throw ParseError("system file must be a JSON object");
    if (j.contains("gamma_m")) return SystemKind::MultiAgent;
    if (j.contains("gamma")) return SystemKind::Extended;
    return SystemKind::Basic;
}

}  // namespace pwl
