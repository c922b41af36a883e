#include <benchmark/benchmark.h>

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pwl/domains.hpp"
#include "pwl/plan.hpp"
#include "pwl/reductions.hpp"
#include "pwl/shrinker.hpp"
#include "pwl/synthesizer.hpp"
#include "pwl/system.hpp"
#include "pwl/verifier.hpp"

namespace {

// Full-horizon verification of a straight-line plan on a goalless system:
// work is exactly num_behaviors * horizon transitions.
void BM_VerifyScaling(benchmark::State &state) {
    const std::size_t num_behaviors = static_cast<std::size_t>(state.range(0));
    const std::size_t horizon = 32;
    const pwl::PwlSystem sys = pwl::gen_random(1, 64, 4, num_behaviors, 0.0);
    std::vector<pwl::ActionId> seq;
    for (std::size_t k = 0; k < horizon; ++k) seq.push_back(static_cast<pwl::ActionId>(k % 4));
    const pwl::PlanTable p = pwl::plan_from_action_sequence(sys, seq, horizon);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pwl::verify(sys, p, horizon, 1.0));
    }
    state.SetComplexityN(static_cast<std::int64_t>(num_behaviors));
}
BENCHMARK(BM_VerifyScaling)->RangeMultiplier(2)->Range(16, 256)->Complexity(benchmark::oN);

void BM_SynthesizeIntro(benchmark::State &state) {
    const pwl::PwlSystem sys = pwl::gen_intro_example();
    for (auto _ : state) {
        benchmark::DoNotOptimize(pwl::synthesize(sys, 3));
    }
}
BENCHMARK(BM_SynthesizeIntro);

void BM_ExistsPlanCnf(benchmark::State &state) {
    const pwl::Cnf3 phi = pwl::random_cnf(5, 4, 4);
    const pwl::PwlSystem sys = pwl::system_from_cnf(phi);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pwl::exists_plan(sys, 8));
    }
}
BENCHMARK(BM_ExistsPlanCnf);

void BM_ShrinkPaddedPlan(benchmark::State &state) {
    const pwl::Cnf3 phi = pwl::random_cnf(11, 4, 3);
    const pwl::PwlSystem sys = pwl::system_from_cnf(phi);
    const auto assignment = pwl::sat_oracle(phi);
    if (!assignment) {
        state.SkipWithError("seeded formula must be satisfiable");
        return;
    }
    const pwl::PlanTable p = pwl::plan_from_assignment(phi, *assignment, sys);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pwl::shrink(sys, p));
    }
}
BENCHMARK(BM_ShrinkPaddedPlan);

}  // namespace

BENCHMARK_MAIN();
