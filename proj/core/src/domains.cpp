#include "pwl/domains.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "pwl/caps.hpp"
#include "pwl/errors.hpp"

namespace pwl {

PwlSystem gen_intro_example() {
    PwlSystem sys;
    sys.state_names = {"s0", "sA", "sB", "gA", "gB", "dead"};
    sys.action_names = {"c", "d", "x", "y"};
    sys.initial = 0;
    sys.goal_mask = {0, 0, 0, 1, 1, 0};
    sys.goal_states = {3, 4};

    const StateId s0 = 0, sA = 1, sB = 2, gA = 3, gB = 4, dead = 5;
    const ActionId c = 0, d = 1, x = 2, y = 3;
    const std::size_t na = sys.action_names.size();

    auto make = [&](const std::string &name) {
        BehaviorTable bt;
        bt.name = name;
        bt.next.assign(sys.state_names.size() * na, dead);
        return bt;
    };
    auto set = [&](BehaviorTable &bt, StateId q, ActionId a, StateId to) {
        bt.next[static_cast<std::size_t>(q) * na + static_cast<std::size_t>(a)] = to;
    };

    BehaviorTable e1 = make("E1");
    set(e1, s0, c, sA);
    set(e1, s0, x, gA);
    set(e1, sA, d, s0);
    set(e1, sB, d, s0);

    BehaviorTable e2 = make("E2");
    set(e2, s0, c, sB);
    set(e2, s0, y, gB);
    set(e2, sA, d, s0);
    set(e2, sB, d, s0);

    sys.behaviors = {std::move(e1), std::move(e2)};
    sys.validate();
    return sys;
}

PwlSystem gen_transport(const TransportGraph &g) {
    if (g.vertices.empty()) throw ValidationError("empty vertex set");
    std::map<std::string, StateId> vertex_id;
    for (const auto &v : g.vertices) {
        if (v == "dead") throw ValidationError("vertex name 'dead' is reserved");
        if (v.empty()) throw ValidationError("empty vertex name");
        if (!vertex_id.emplace(v, static_cast<StateId>(vertex_id.size())).second) {
            throw ValidationError("duplicate vertex: " + v);
        }
    }
    auto vertex = [&](const std::string &name) {
        auto it = vertex_id.find(name);
        if (it == vertex_id.end()) throw ValidationError("unknown vertex: " + name);
        return it->second;
    };
    const StateId start = vertex(g.start);
    const StateId target = vertex(g.target);

    std::vector<std::string> labels;
    auto action_of = [&](const std::string &label) {
        if (label.empty()) throw ValidationError("empty edge label");
        auto it = std::find(labels.begin(), labels.end(), label);
        if (it == labels.end()) {
            labels.push_back(label);
            return static_cast<ActionId>(labels.size() - 1);
        }
        return static_cast<ActionId>(it - labels.begin());
    };

    // (vertex, label) -> either a fixed endpoint or an uncertain edge index.
    struct Route {
        bool is_uncertain = false;
        StateId to = 0;
        std::size_t uncertain_index = 0;
    };
    std::map<std::pair<StateId, ActionId>, Route> routes;
    for (const auto &e : g.edges) {
        const auto key = std::make_pair(vertex(e.from), action_of(e.label));
        if (!routes.emplace(key, Route{false, vertex(e.to), 0}).second) {
            throw ValidationError("duplicate route: " + e.from + " via " + e.label);
        }
    }
    for (std::size_t u = 0; u < g.uncertain.size(); ++u) {
        const auto &e = g.uncertain[u];
        if (e.endpoints.empty()) throw ValidationError("uncertain edge with no endpoints: " + e.label);
        for (const auto &ep : e.endpoints) vertex(ep);
        const auto key = std::make_pair(vertex(e.from), action_of(e.label));
        if (!routes.emplace(key, Route{true, 0, u}).second) {
            throw ValidationError("duplicate route: " + e.from + " via " + e.label);
        }
    }

    std::size_t product = 1;
    for (const auto &e : g.uncertain) {
        if (product > caps().max_behaviors / e.endpoints.size()) {
            throw CapExceeded("behavior product exceeds PWL_MAX_BEHAVIORS");
        }
        product *= e.endpoints.size();
    }

    PwlSystem sys;
    sys.state_names = g.vertices;
    sys.state_names.push_back("dead");
    const StateId dead = static_cast<StateId>(sys.state_names.size() - 1);
    sys.action_names = labels;
    sys.initial = start;
    sys.goal_mask.assign(sys.state_names.size(), 0);
    sys.goal_mask[static_cast<std::size_t>(target)] = 1;
    sys.goal_states = {target};

    const std::size_t na = sys.action_names.size();
    std::vector<std::size_t> choice(g.uncertain.size(), 0);
    for (std::size_t combo = 0; combo < product; ++combo) {
        BehaviorTable bt;
        bt.name = "b";
        for (std::size_t u = 0; u < choice.size(); ++u) bt.name += "_" + std::to_string(choice[u]);
        bt.next.assign(sys.state_names.size() * na, dead);
        for (const auto &[key, route] : routes) {
            const StateId to = route.is_uncertain
                                   ? vertex(g.uncertain[route.uncertain_index].endpoints[choice[route.uncertain_index]])
                                   : route.to;
            bt.next[static_cast<std::size_t>(key.first) * na + static_cast<std::size_t>(key.second)] = to;
        }
        sys.behaviors.push_back(std::move(bt));
        for (std::size_t u = choice.size(); u-- > 0;) {
            if (++choice[u] < g.uncertain[u].endpoints.size()) break;
            choice[u] = 0;
        }
    }

    sys.validate();
    return sys;
}

PwlSystem gen_random(std::uint64_t seed, std::size_t num_states, std::size_t num_actions,
                     std::size_t num_behaviors, double goal_density) {
    if (num_states < 1 || num_actions < 1 || num_behaviors < 1) {
        throw ValidationError("sizes must be at least 1");
    }
    if (goal_density < 0.0 || goal_density > 1.0) throw ValidationError("goal density outside [0, 1]");

    std::mt19937_64 rng(seed);
    PwlSystem sys;
    for (std::size_t q = 0; q < num_states; ++q) sys.state_names.push_back("q" + std::to_string(q));
    for (std::size_t a = 0; a < num_actions; ++a) sys.action_names.push_back("a" + std::to_string(a));
    sys.initial = 0;

    for (std::size_t b = 0; b < num_behaviors; ++b) {
        BehaviorTable bt;
        bt.name = "E" + std::to_string(b + 1);
        bt.next.reserve(num_states * num_actions);
        for (std::size_t i = 0; i < num_states * num_actions; ++i) {
            bt.next.push_back(static_cast<StateId>(rng() % num_states));
        }
        sys.behaviors.push_back(std::move(bt));
    }

    sys.goal_mask.assign(num_states, 0);
    for (std::size_t q = 0; q < num_states; ++q) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < goal_density) {
            sys.goal_mask[q] = 1;
            sys.goal_states.push_back(static_cast<StateId>(q));
        }
    }

    sys.validate();
    return sys;
}

}  // namespace pwl
