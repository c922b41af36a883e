#pragma once

#include <cstddef>

namespace pwl {

// Hard limits on generated or loaded model sizes.  Defaults may be
// overridden by the PWL_MAX_STATES and PWL_MAX_BEHAVIORS environment
// variables at process startup.
struct Caps {
    std::size_t max_states = 65536;
    std::size_t max_behaviors = 4096;
};

// Caps resolved from the environment once per process.
const Caps &caps();

}  // namespace pwl
