#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace pwl {

struct BenchPoint {
    std::size_t num_behaviors = 0;
    std::size_t plan_entries = 0;
    std::size_t step_applications = 0;  // deterministic work count, one verify
    std::size_t iterations = 0;         // timed verify calls per measurement
    double seconds_per_verify = 0.0;    // median over repeated measurements
};

struct BenchReport {
    std::size_t num_states = 0;
    std::size_t num_actions = 0;
    std::size_t horizon = 0;
    std::uint64_t seed = 0;
    std::vector<BenchPoint> points;  // one per requested behavior count
};

// Times full-horizon verification of a fixed straight-line plan against
// seeded random goalless systems with a growing behavior count.  Every
// branch runs the whole horizon, so one verify applies exactly
// num_behaviors * horizon transitions.  Iteration counts are calibrated
// from a wall-clock estimate and are not deterministic; the work counts
// are.
BenchReport run_scaling_bench(const std::vector<std::size_t> &behavior_counts, std::size_t num_states,
                              std::size_t horizon, std::uint64_t seed);

}  // namespace pwl
