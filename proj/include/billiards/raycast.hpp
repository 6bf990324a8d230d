#pragma once

#include <cstddef>
#include <variant>

#include "billiards/geometry.hpp"

namespace billiards {

struct RaycastOptions {
    // March stride as a fraction of the bounding radius R.
    double stride_fraction = 0.01;
    // Crossings at or before this time are ignored so a ray leaving a
    // boundary point does not re-detect it.
    double min_time = 1e-12;
    long step_budget = 100000;
    double grazing_tolerance = 1e-6;
};

struct HitRecord {
    Vector point;
    double time = 0.0;
    std::size_t body_index = 0;
    UnitVector normal;  // out of the obstacle, into the domain
    bool grazing = false;
};

struct SphereExit {
    Vector point;
    double time = 0.0;
};

struct StepBudgetExhausted {
    long steps = 0;
};

struct GradientFailure {
    Vector point;
    double time = 0.0;
    std::size_t body_index = 0;
};

using RayEvent = std::variant<HitRecord, SphereExit, StepBudgetExhausted, GradientFailure>;

// Time at which q + t·v leaves the ball (largest root, clamped at tangency).
double sphere_exit_time(const BoundingBall& ball, const Vector& q, const UnitVector& v);

// Earliest obstacle crossing along q + t·v with t > min_time, else the exit
// through the bounding sphere. Obstacle crossings are found by fixed-stride
// sampling inside each body's bounding ball, sign-change bracketing (plus a
// golden-section probe of sampled local minima for shallow grazing dips),
// bisection to a 1e-12 interval and one Newton polish. Reported hit points
// always lie on the non-negative side of the field.
RayEvent first_hit(const Scene& scene, const Vector& q, const UnitVector& v, const RaycastOptions& options = {});

}  // namespace billiards
