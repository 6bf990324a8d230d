#include "billiards/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "billiards/parallel.hpp"

namespace billiards {

namespace {

constexpr int kUnbinned = -1;

struct Binner {
    const Scene& scene;
    const BoundaryLiouvilleSampler& sampler;
    int position_bins;
    int cosine_bins;

    int operator()(const BoundaryState& s) const {
        Vector center;
        UnitVector normal;
        if (s.component < 0) {
            center = scene.bounding.center;
            normal = sphere_inward_normal(scene.bounding, s.x.q);
        } else {
            const auto& ball = std::get<Ball>(scene.bodies[static_cast<std::size_t>(s.component)].shape());
            center = ball.center;
            normal = UnitVector::normalize(s.x.q - center);
        }
        const Vector rel = s.x.q - center;
        double angle = std::atan2(rel[1], rel[0]);
        if (angle < 0.0) angle += 2.0 * std::numbers::pi;
        const double arc = sampler.component_offset(s.component) +
                           sampler.component_area(s.component) * angle / (2.0 * std::numbers::pi);
        const double cosine = dot(normal.vec(), s.x.v.vec());
        if (!(cosine >= 0.0)) return kUnbinned;
        const int pb = std::min(position_bins - 1, static_cast<int>(arc / sampler.boundary_area() * position_bins));
        const int cb = std::min(cosine_bins - 1, static_cast<int>(cosine * cosine_bins));
        return pb * cosine_bins + cb;
    }
};

// P(⟨ν, v⟩ ∈ [c1, c2]) under the planar cosine law is √(1−c1²) − √(1−c2²).
std::vector<double> cell_probabilities(int position_bins, int cosine_bins) {
    std::vector<double> p(static_cast<std::size_t>(position_bins * cosine_bins));
    for (int pb = 0; pb < position_bins; ++pb) {
        for (int cb = 0; cb < cosine_bins; ++cb) {
            const double c1 = static_cast<double>(cb) / cosine_bins;
            const double c2 = static_cast<double>(cb + 1) / cosine_bins;
            p[static_cast<std::size_t>(pb * cosine_bins + cb)] =
                (std::sqrt(1.0 - c1 * c1) - std::sqrt(1.0 - c2 * c2)) / position_bins;
        }
    }
    return p;
}

double chi_squared(const std::vector<std::uint64_t>& observed, const std::vector<double>& prob, std::uint64_t n) {
    double chi = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double expected = prob[i] * static_cast<double>(n);
        const double d = static_cast<double>(observed[i]) - expected;
        chi += d * d / expected;
    }
    return chi;
}

}  // namespace

InvarianceResult map_invariance_test(const Scene& scene, std::uint64_t samples, std::uint64_t seed,
                                     int position_bins, int cosine_bins, int workers) {
    if (scene.dimension != 2) throw std::invalid_argument("map invariance test is planar only");
    const BoundaryLiouvilleSampler sampler(scene, seed);
    const Binner binner{scene, sampler, position_bins, cosine_bins};
    const auto n = static_cast<std::int64_t>(samples);
    std::vector<int> source_bin(samples), image_bin(samples);
#pragma omp parallel for schedule(dynamic, 1024) num_threads(resolve_workers(workers))
    for (std::int64_t i = 0; i < n; ++i) {
        const BoundaryState s = sampler.sample(static_cast<std::uint64_t>(i));
        const auto idx = static_cast<std::size_t>(i);
        source_bin[idx] = binner(s);
        const auto next = billiard_map(scene, s.x);
        image_bin[idx] = std::holds_alternative<BoundaryState>(next) ? binner(std::get<BoundaryState>(next))
                                                                     : kUnbinned;
    }
    const std::size_t cells = static_cast<std::size_t>(position_bins * cosine_bins);
    std::vector<std::uint64_t> src(cells, 0), img(cells, 0);
    InvarianceResult r;
    std::uint64_t n_src = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        if (source_bin[i] != kUnbinned) {
            ++src[static_cast<std::size_t>(source_bin[i])];
            ++n_src;
        }
        if (image_bin[i] == kUnbinned) {
            ++r.degenerate;
        } else {
            ++img[static_cast<std::size_t>(image_bin[i])];
            ++r.used;
        }
    }
    const auto prob = cell_probabilities(position_bins, cosine_bins);
    r.degrees_of_freedom = static_cast<int>(cells) - 1;
    r.chi_squared_source = chi_squared(src, prob, n_src);
    r.chi_squared_image = chi_squared(img, prob, r.used);
    const double half_dof = 0.5 * r.degrees_of_freedom;
    r.p_value_source = boost::math::gamma_q(half_dof, 0.5 * r.chi_squared_source);
    r.p_value_image = boost::math::gamma_q(half_dof, 0.5 * r.chi_squared_image);
    return r;
}

ReversalSummary time_reversal_sweep(const Scene& scene, std::uint64_t count, std::uint64_t seed, const Caps& caps,
                                    const RaycastOptions& options) {
    const LiouvilleSampler sampler(scene, seed);
    ReversalSummary summary;
    for (std::uint64_t i = 0; summary.checked < count; ++i) {
        if (i > 100 * count + 1000) break;
        ++summary.attempted;
        const UnitPhasePoint entry = sampler.sample_entry(i);
        const TraceOutcome outcome = trace(scene, entry, caps, options);
        const auto* exited = std::get_if<Exited>(&outcome);
        if (!exited) continue;
        summary.max_deviation =
            std::max(summary.max_deviation, time_reverse_check(scene, *exited, entry, caps, options));
        ++summary.checked;
    }
    return summary;
}

}  // namespace billiards
