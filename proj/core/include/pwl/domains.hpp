#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pwl/system.hpp"

namespace pwl {

// The two-route sensing example: probing with c reveals which of two
// behaviors governs the world, and the revealed branch picks the only
// action that pays off under it.  Unspecified moves drop into an absorbing
// dead state.
PwlSystem gen_intro_example();

struct TransportEdge {
    std::string label;
    std::string from;
    std::string to;
};

// A route whose endpoint is uncertain: one of `endpoints` is real, and
// which one is part of the unknown behavior.
struct UncertainEdge {
    std::string label;
    std::string from;
    std::vector<std::string> endpoints;
};

struct TransportGraph {
    std::vector<std::string> vertices;  // "dead" is reserved
    std::vector<TransportEdge> edges;
    std::vector<UncertainEdge> uncertain;
    std::string start;
    std::string target;
};

// Builds a system over the graph's vertices plus an absorbing dead state.
// Actions are the distinct edge labels in first-appearance order; each
// behavior fixes one endpoint per uncertain edge (the cartesian product,
// last uncertain edge varying fastest); any label without an edge at a
// vertex leads to dead.  Throws ValidationError on malformed graphs and
// CapExceeded when the product exceeds the behavior cap.
PwlSystem gen_transport(const TransportGraph &g);

// Seeded random system: uniform independent transitions, goal membership
// drawn per state with probability `goal_density`, initial state q0.
// Identical arguments produce an identical system.
PwlSystem gen_random(std::uint64_t seed, std::size_t num_states, std::size_t num_actions,
                     std::size_t num_behaviors, double goal_density);

}  // namespace pwl
