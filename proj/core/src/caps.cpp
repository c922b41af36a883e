#include "pwl/caps.hpp"

#include <cstdlib>
#include <string>

#include "pwl/errors.hpp"

namespace pwl {

namespace {

std::size_t env_size(const char *name, std::size_t fallback) {
    const char *raw = std::getenv(name);
    if (raw == nullptr || *raw == '\0') return fallback;
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(raw, &pos);
    } catch (const std::exception &) {
        throw ValidationError(std::string(name) + " is not a positive integer: " + raw);
    }
    if (pos != std::string(raw).size() || v == 0) {
        throw ValidationError(std::string(name) + " is not a positive integer: " + raw);
    }
    return static_cast<std::size_t>(v);
}

}  // namespace

const Caps &caps() {
    static const Caps instance{
        env_size("PWL_MAX_STATES", Caps{}.max_states),
        env_size("PWL_MAX_BEHAVIORS", Caps{}.max_behaviors),
    };
    return instance;
}

}  // namespace pwl
