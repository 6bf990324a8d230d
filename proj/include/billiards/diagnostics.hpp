#pragma once

#include <cstdint>

#include "billiards/estimators.hpp"

namespace billiards {

struct InvarianceResult {
    double chi_squared_source = 0.0;  // sampled states against the exact μ law
    double chi_squared_image = 0.0;   // their images under the billiard map
    int degrees_of_freedom = 0;
    double p_value_source = 0.0;
    double p_value_image = 0.0;
    std::uint64_t used = 0;
    std::uint64_t degenerate = 0;
};

// Draws N states from μ on S⁺(∂Ω) of a planar ball-obstacle scene, pushes
// them through the billiard map, and bins (boundary arc length × ⟨ν, v⟩)
// against the exact μ cell probabilities with a chi-squared test.
InvarianceResult map_invariance_test(const Scene& scene, std::uint64_t samples, std::uint64_t seed,
                                     int position_bins = 20, int cosine_bins = 10, int workers = 0);

struct ReversalSummary {
    std::uint64_t checked = 0;
    std::uint64_t attempted = 0;
    double max_deviation = 0.0;
};

// Runs time_reverse_check on the first `count` exited Liouville entries.
// Throws ReversalMismatch on the first failure.
ReversalSummary time_reversal_sweep(const Scene& scene, std::uint64_t count, std::uint64_t seed, const Caps& caps,
                                    const RaycastOptions& options = {});

}  // namespace billiards
