#pragma once

#include <cstdint>
#include <vector>

#include "billiards/dynamics.hpp"
#include "billiards/estimate.hpp"

namespace billiards {

// Direction with density ∝ ⟨normal, v⟩ on the hemisphere around `normal`,
// from two uniforms on [0, 1). Planar scenes use u1 only.
UnitVector cosine_weighted_direction(const UnitVector& normal, int dimension, double u1, double u2);

// Uniform point on the unit sphere S^{n−1}.
UnitVector uniform_sphere_direction(int dimension, double u1, double u2);

// Samples the normalised Liouville measure μ on S⁺(∂M): positions uniform on
// the bounding sphere, directions cosine-weighted about the inward normal.
// sample_entry(i) depends only on (seed, i).
class LiouvilleSampler {
public:
    LiouvilleSampler(const Scene& scene, std::uint64_t seed) : scene_(&scene), seed_(seed) {}

    UnitPhasePoint sample_entry(std::uint64_t index) const;
    std::uint64_t seed() const { return seed_; }

private:
    const Scene* scene_;
    std::uint64_t seed_;
};

// Samples μ on S⁺(∂Ω) = sphere ∪ obstacle boundaries. Supported for scenes
// whose obstacles are all balls (uniform surface sampling is closed-form).
class BoundaryLiouvilleSampler {
public:
    BoundaryLiouvilleSampler(const Scene& scene, std::uint64_t seed);

    BoundaryState sample(std::uint64_t index) const;
    // Total boundary area (sphere plus obstacles).
    double boundary_area() const { return cumulative_.back(); }
    // Area of component c (-1 = bounding sphere) and its offset in the
    // concatenated boundary parametrisation.
    double component_area(long component) const;
    double component_offset(long component) const;

private:
    const Scene* scene_;
    std::uint64_t seed_;
    std::vector<double> cumulative_;  // [sphere, sphere+body0, ...]
};

// c_n = ∫ over the inward hemisphere of ⟨ν, v⟩ dω: 2 for n = 2, π for n = 3.
double cosine_hemisphere_integral(int dimension);

// Vol_{n−1}(∂M)·c_n.
double mu_total(const Scene& scene);

struct VolumeOptions {
    std::uint64_t points = 10'000'000;
    std::uint64_t seed = 0x0b57ac1e5eedULL;
    int workers = 0;
};

// Rejection-sampled volume of one body inside its bounding cube.
Estimate monte_carlo_volume(const ImplicitBody& body, int dimension, const VolumeOptions& options = {});

// Σ obstacle volumes: closed form where available, Monte Carlo otherwise
// (errors combined in quadrature).
Estimate obstacle_volume(const Scene& scene, const VolumeOptions& options = {});

// λ(S(Ω)) = (Vol_n(M) − Vol_n(K))·Vol_{n−1}(S^{n−1}).
Estimate lambda_total(const Scene& scene, const VolumeOptions& options = {});

struct MeasureConstants {
    double mu_total = 0.0;
    Estimate lambda_total;
    double sphere_area = 0.0;
    Estimate obstacle_volume;
};

MeasureConstants measure_constants(const Scene& scene, const VolumeOptions& options = {});

}  // namespace billiards
