#pragma once

#include <cstdint>

#include "billiards/dynamics.hpp"

namespace billiards {

// Degenerate samples above this fraction mark an estimate unreliable.
inline constexpr double kMaxDegenerateFraction = 1e-4;

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t n_censored = 0;
    std::uint64_t n_degenerate = 0;
    Caps caps;
    std::uint64_t seed = 0;

    bool unreliable() const {
        return n_samples > 0 &&
               static_cast<double>(n_degenerate) > kMaxDegenerateFraction * static_cast<double>(n_samples);
    }
};

}  // namespace billiards
