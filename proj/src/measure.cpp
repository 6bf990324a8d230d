#include "billiards/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "billiards/parallel.hpp"
#include "billiards/rng.hpp"

namespace billiards {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Orthonormal tangent pair for a unit normal (Duff et al., branchless).
void tangent_basis(const Vector& n, Vector& b1, Vector& b2) {
    const double sign = std::copysign(1.0, n[2]);
    const double a = -1.0 / (sign + n[2]);
    const double b = n[0] * n[1] * a;
    b1 = {1.0 + sign * n[0] * n[0] * a, sign * b, -sign * n[0]};
    b2 = {b, sign + n[1] * n[1] * a, -n[1]};
}

}  // namespace

UnitVector cosine_weighted_direction(const UnitVector& normal, int dimension, double u1, double u2) {
    const Vector& n = normal.vec();
    if (dimension == 2) {
        // sin θ uniform on (−1, 1) gives density cos θ / 2 on (−π/2, π/2)
        const double s = 2.0 * u1 - 1.0;
        const double c = std::sqrt(std::max(0.0, 1.0 - s * s));
        const Vector t{-n[1], n[0], 0.0};
        return UnitVector::normalize(c * n + s * t);
    }
    // Malley's method: uniform disk point lifted to the hemisphere
    const double r = std::sqrt(u1);
    const double phi = kTwoPi * u2;
    Vector b1, b2;
    tangent_basis(n, b1, b2);
    const double up = std::sqrt(std::max(0.0, 1.0 - u1));
    return UnitVector::normalize((r * std::cos(phi)) * b1 + (r * std::sin(phi)) * b2 + up * n);
}

UnitVector uniform_sphere_direction(int dimension, double u1, double u2) {
    if (dimension == 2) {
        const double phi = kTwoPi * u1;
        return UnitVector::normalize({std::cos(phi), std::sin(phi), 0.0});
    }
    const double z = 1.0 - 2.0 * u1;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = kTwoPi * u2;
    return UnitVector::normalize({r * std::cos(phi), r * std::sin(phi), z});
}

UnitPhasePoint LiouvilleSampler::sample_entry(std::uint64_t index) const {
    CounterRng rng(seed_, index);
    const int dim = scene_->dimension;
    const double u1 = rng.uniform();
    const double u2 = dim == 3 ? rng.uniform() : 0.0;
    const UnitVector outward = uniform_sphere_direction(dim, u1, u2);
    const Vector q = scene_->bounding.center + scene_->bounding.radius * outward.vec();
    const double w1 = rng.uniform();
    const double w2 = dim == 3 ? rng.uniform() : 0.0;
    return {q, cosine_weighted_direction(-outward, dim, w1, w2)};
}

namespace {

double sphere_area(int dimension, double radius) {
    return dimension == 2 ? kTwoPi * radius : 4.0 * std::numbers::pi * radius * radius;
}

}  // namespace

BoundaryLiouvilleSampler::BoundaryLiouvilleSampler(const Scene& scene, std::uint64_t seed)
    : scene_(&scene), seed_(seed) {
    cumulative_.push_back(sphere_area(scene.dimension, scene.bounding.radius));
    for (const auto& body : scene.bodies) {
        const auto* ball = std::get_if<Ball>(&body.shape());
        if (!ball) throw std::invalid_argument("boundary sampling supports ball obstacles only");
        cumulative_.push_back(cumulative_.back() + sphere_area(scene.dimension, ball->radius));
    }
}

double BoundaryLiouvilleSampler::component_area(long component) const {
    const auto i = static_cast<std::size_t>(component + 1);
    return i == 0 ? cumulative_[0] : cumulative_[i] - cumulative_[i - 1];
}

double BoundaryLiouvilleSampler::component_offset(long component) const {
    const auto i = static_cast<std::size_t>(component + 1);
    return i == 0 ? 0.0 : cumulative_[i - 1];
}

BoundaryState BoundaryLiouvilleSampler::sample(std::uint64_t index) const {
    CounterRng rng(seed_, index);
    const int dim = scene_->dimension;
    const double pick = rng.uniform() * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), pick);
    const long component = std::min<long>(static_cast<long>(it - cumulative_.begin()),
                                          static_cast<long>(cumulative_.size()) - 1) - 1;
    const double u1 = rng.uniform();
    const double u2 = dim == 3 ? rng.uniform() : 0.0;
    const UnitVector radial = uniform_sphere_direction(dim, u1, u2);
    Vector q;
    UnitVector normal;
    if (component < 0) {
        q = scene_->bounding.center + scene_->bounding.radius * radial.vec();
        normal = -radial;
    } else {
        const auto& ball = std::get<Ball>(scene_->bodies[static_cast<std::size_t>(component)].shape());
        q = ball.center + ball.radius * radial.vec();
        normal = radial;
    }
    const double w1 = rng.uniform();
    const double w2 = dim == 3 ? rng.uniform() : 0.0;
    return {{q, cosine_weighted_direction(normal, dim, w1, w2)}, component};
}

double cosine_hemisphere_integral(int dimension) { return dimension == 2 ? 2.0 : std::numbers::pi; }

double mu_total(const Scene& scene) {
    return sphere_area(scene.dimension, scene.bounding.radius) * cosine_hemisphere_integral(scene.dimension);
}

Estimate monte_carlo_volume(const ImplicitBody& body, int dimension, const VolumeOptions& options) {
    const BoundingBall bb = body.bounds();
    const double side = 2.0 * bb.radius;
    const double box = dimension == 2 ? side * side : side * side * side;
    const auto n = static_cast<std::int64_t>(options.points);
    std::int64_t inside = 0;
#pragma omp parallel for schedule(static) reduction(+ : inside) num_threads(resolve_workers(options.workers))
    for (std::int64_t i = 0; i < n; ++i) {
        CounterRng rng(options.seed, static_cast<std::uint64_t>(i));
        Vector p = bb.center;
        for (int d = 0; d < dimension; ++d) p[d] += (rng.uniform() - 0.5) * side;
        if (body.value(p) < 0.0) ++inside;
    }
    const double frac = static_cast<double>(inside) / static_cast<double>(n);
    Estimate e;
    e.value = box * frac;
    e.std_error = box * std::sqrt(frac * (1.0 - frac) / static_cast<double>(n));
    e.n_samples = options.points;
    e.seed = options.seed;
    return e;
}

Estimate obstacle_volume(const Scene& scene, const VolumeOptions& options) {
    Estimate total;
    total.seed = options.seed;
    double var = 0.0;
    for (const auto& body : scene.bodies) {
        if (auto exact = closed_form_volume(body, scene.dimension)) {
            total.value += *exact;
            continue;
        }
        const Estimate mc = monte_carlo_volume(body, scene.dimension, options);
        total.value += mc.value;
        var += mc.std_error * mc.std_error;
        total.n_samples += mc.n_samples;
    }
    total.std_error = std::sqrt(var);
    return total;
}

Estimate lambda_total(const Scene& scene, const VolumeOptions& options) {
    const Estimate k = obstacle_volume(scene, options);
    const double area = unit_sphere_area(scene.dimension);
    Estimate e = k;
    e.value = (ball_volume(scene.dimension, scene.bounding.radius) - k.value) * area;
    e.std_error = k.std_error * area;
    return e;
}

MeasureConstants measure_constants(const Scene& scene, const VolumeOptions& options) {
    MeasureConstants m;
    m.mu_total = mu_total(scene);
    m.obstacle_volume = obstacle_volume(scene, options);
    const double area = unit_sphere_area(scene.dimension);
    m.lambda_total = m.obstacle_volume;
    m.lambda_total.value = (ball_volume(scene.dimension, scene.bounding.radius) - m.obstacle_volume.value) * area;
    m.lambda_total.std_error = m.obstacle_volume.std_error * area;
    m.sphere_area = sphere_area(scene.dimension, scene.bounding.radius);
    return m;
}

}  // namespace billiards
