#include "pwl/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "pwl/domains.hpp"
#include "pwl/errors.hpp"
#include "pwl/plan.hpp"
#include "pwl/verifier.hpp"

namespace pwl {

namespace {

double time_batch(const PwlSystem &sys, const PlanTable &p, std::size_t horizon, std::size_t iterations) {
    const auto start = std::chrono::steady_clock::now();
    std::size_t guard = 0;
    for (std::size_t i = 0; i < iterations; ++i) {
        Verdict v = verify(sys, p, horizon, 1.0);
        guard += v.step_applications;
    }
    const auto stop = std::chrono::steady_clock::now();
    // Keeps the verify calls observable so the loop cannot be elided.
    if (guard == 0) throw ValidationError("benchmark measured no work");
    return std::chrono::duration<double>(stop - start).count();
}

}  // namespace

BenchReport run_scaling_bench(const std::vector<std::size_t> &behavior_counts, std::size_t num_states,
                              std::size_t horizon, std::uint64_t seed) {
    if (behavior_counts.empty()) throw ValidationError("no behavior counts given");
    if (horizon == 0) throw ValidationError("horizon must be positive");

    BenchReport report;
    report.num_states = num_states;
    report.num_actions = 4;
    report.horizon = horizon;
    report.seed = seed;

    std::vector<ActionId> seq;
    for (std::size_t k = 0; k < horizon; ++k) seq.push_back(static_cast<ActionId>(k % report.num_actions));

    for (std::size_t s : behavior_counts) {
        // goal_density 0 keeps every branch running the full horizon.
        PwlSystem sys = gen_random(seed, num_states, report.num_actions, s, 0.0);
        PlanTable plan = plan_from_action_sequence(sys, seq, horizon);

        BenchPoint point;
        point.num_behaviors = s;
        point.plan_entries = plan.size();
        point.step_applications = verify(sys, plan, horizon, 1.0).step_applications;

        const double estimate = time_batch(sys, plan, horizon, 1);
        point.iterations = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.002 / std::max(estimate, 1e-9))));
        std::vector<double> samples;
        for (int r = 0; r < 5; ++r) samples.push_back(time_batch(sys, plan, horizon, point.iterations));
        std::sort(samples.begin(), samples.end());
        point.seconds_per_verify = samples[samples.size() / 2] / static_cast<double>(point.iterations);

        report.points.push_back(point);
    }
    return report;
}

}  // namespace pwl
