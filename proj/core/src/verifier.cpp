#include "pwl/verifier.hpp"

#include <future>
#include <thread>

#include "pwl/errors.hpp"

namespace pwl {

Trace simulate(const PwlSystem &sys, const PlanTable &p, BehaviorId behavior, std::size_t horizon) {
    if (behavior < 0 || static_cast<std::size_t>(behavior) >= sys.num_behaviors()) {
        throw IndexError("behavior id out of range");
    }
    Trace t;
    t.behavior = behavior;
    StateId q = sys.initial;
    HistoryKey h(q);
    for (;;) {
        if (sys.is_goal(q)) {
            t.outcome = Outcome::GoalReached;
            break;
        }
        if (t.steps.size() == horizon) {
            t.outcome = Outcome::HorizonExhausted;
            break;
        }
        auto a = p.lookup(h);
        if (!a) {
            t.outcome = Outcome::UndefinedEntry;
            t.undefined_history = h;
            break;
        }
        t.steps.emplace_back(q, *a);
        q = sys.step(behavior, q, *a);
        h.append(*a, q);
    }
    t.final_state = q;
    t.goal_step = t.steps.size();
    return t;
}

Verdict verify(const PwlSystem &sys, const PlanTable &p, std::size_t horizon, double theta) {
    if (!(theta > 0.0 && theta <= 1.0)) throw ValidationError("threshold outside (0, 1]");
    validate_plan(sys, p);

    const auto s = static_cast<BehaviorId>(sys.num_behaviors());
    Verdict v;
    v.threshold = theta;
    v.traces.resize(static_cast<std::size_t>(s));

    const unsigned hw = std::thread::hardware_concurrency();
    if (s >= 64 && hw > 1) {
        // Behaviors are independent; run chunks concurrently and merge in
        // behavior order so results never depend on scheduling.
        const unsigned workers = hw;
        std::vector<std::future<void>> futs;
        futs.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            futs.push_back(std::async(std::launch::async, [&, w] {
                for (BehaviorId b = static_cast<BehaviorId>(w); b < s; b += static_cast<BehaviorId>(workers)) {
                    v.traces[static_cast<std::size_t>(b)] = simulate(sys, p, b, horizon);
                }
            }));
        }
        for (auto &f : futs) f.get();
    } else {
        for (BehaviorId b = 0; b < s; ++b) {
            v.traces[static_cast<std::size_t>(b)] = simulate(sys, p, b, horizon);
        }
    }

    for (const auto &t : v.traces) {
        v.step_applications += t.steps.size();
        if (t.outcome == Outcome::GoalReached) ++v.satisfied_count;
    }
    v.satisfied_fraction = static_cast<double>(v.satisfied_count) / static_cast<double>(s);
    v.satisfactory = v.satisfied_fraction >= theta;
    return v;
}

}  // namespace pwl
