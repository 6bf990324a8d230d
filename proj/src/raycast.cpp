#include "billiards/raycast.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace billiards {

double sphere_exit_time(const BoundingBall& ball, const Vector& q, const UnitVector& v) {
    const Vector d = q - ball.center;
    const double b = dot(d, v.vec());
    const double c = norm2(d) - ball.radius * ball.radius;
    const double disc = std::max(0.0, b * b - c);
    return -b + std::sqrt(disc);
}

namespace {

constexpr double kBracketWidth = 1e-12;
constexpr double kInvPhi = 0.6180339887498949;
// A probed minimum this close to zero is an exact tangency: reported as a
// (grazing) contact rather than a miss.
constexpr double kTangentContact = 1e-12;

struct BudgetExceeded {};

class Marcher {
public:
    Marcher(const ImplicitBody& body, const Vector& q, const UnitVector& v, long& steps, long budget)
        : body_(body), q_(q), v_(v), steps_(steps), budget_(budget) {}

    double f(double t) {
        if (++steps_ > budget_) throw BudgetExceeded{};
        return body_.value(q_ + t * v_.vec());
    }

    // First + → − crossing in (lo, hi], if any.
    std::optional<double> march(double lo, double hi, double stride) {
        double t_prev = lo;
        double f_prev = f(lo);
        double t_pp = lo, f_pp = 0.0;
        bool have_pp = false;
        for (long k = 1;; ++k) {
            const double t = std::min(lo + static_cast<double>(k) * stride, hi);
            const double ft = f(t);
            if (f_prev > 0.0 && ft <= 0.0) return refine(t_prev, t);
            if (have_pp && f_pp > 0.0 && f_prev > 0.0 && ft > 0.0 && f_prev <= f_pp && f_prev <= ft &&
                f_prev < 2.0 * stride) {
                if (auto c = probe_minimum(t_pp, t)) return c;
            }
            if (t >= hi) {
                // still descending at the end of the window, or the window
                // (a near-tangent chord of the bounds) is a single interval
                if (f_prev > 0.0 && ft > 0.0 && (ft < f_prev || !have_pp) &&
                    std::min(ft, f_prev) < 2.0 * stride) {
                    if (auto c = probe_minimum(t_prev, t)) return c;
                }
                return std::nullopt;
            }
            t_pp = t_prev;
            f_pp = f_prev;
            have_pp = true;
            t_prev = t;
            f_prev = ft;
        }
    }

private:
    // Golden-section search for the minimum on [a, b]; when it dips below zero
    // the crossing is bracketed by [a, t_min].
    std::optional<double> probe_minimum(double a, double b) {
        const double a0 = a, b0 = b;
        double x1 = b - kInvPhi * (b - a);
        double x2 = a + kInvPhi * (b - a);
        double f1 = f(x1), f2 = f(x2);
        while (b - a > kBracketWidth) {
            if (f1 <= 0.0) return refine(a0, x1);
            if (f2 <= 0.0) return refine(a0, x2);
            if (f1 < f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - kInvPhi * (b - a);
                f1 = f(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + kInvPhi * (b - a);
                f2 = f(x2);
            }
        }
        // only an interior minimum is a tangency; one pinned to an end is the
        // ray leaving the surface it starts on
        const double x = f1 < f2 ? x1 : x2;
        const double clearance = 1e-3 * (b0 - a0);
        if (std::min(f1, f2) <= kTangentContact && x - a0 > clearance && b0 - x > clearance) return x;
        return std::nullopt;
    }

    // [t_pos, t_neg] with f(t_pos) > 0 ≥ f(t_neg).
    double refine(double t_pos, double t_neg) {
        while (t_neg - t_pos > kBracketWidth) {
            const double mid = 0.5 * (t_pos + t_neg);
            if (mid <= t_pos || mid >= t_neg) break;
            if (f(mid) > 0.0) t_pos = mid; else t_neg = mid;
        }
        const double t_mid = 0.5 * (t_pos + t_neg);
        const FieldSample s = body_.sample(q_ + t_mid * v_.vec());
        const double slope = dot(s.gradient, v_.vec());
        if (slope != 0.0 && std::isfinite(slope)) {
            const double t_newton = t_mid - s.value / slope;
            if (t_newton >= t_pos && t_newton <= t_neg + kBracketWidth) {
                // back off from the far side in doubling ulp steps; falling
                // back to t_pos would cost four orders of magnitude, which a
                // dispersing billiard amplifies every bounce
                double step = std::nextafter(t_newton, 0.0) - t_newton;
                double t = t_newton;
                for (int i = 0; i < 40 && t > t_pos; ++i, step *= 2.0) {
                    if (f(t) >= 0.0) return t;
                    t = t_newton + step;
                }
            }
        }
        return t_pos;
    }

    const ImplicitBody& body_;
    const Vector& q_;
    const UnitVector& v_;
    long& steps_;
    long budget_;
};

// Parameter interval where the ray is inside the ball, if it meets it.
std::optional<std::pair<double, double>> ray_ball_interval(const BoundingBall& ball, const Vector& q,
                                                           const UnitVector& v) {
    const Vector d = q - ball.center;
    const double tc = -dot(d, v.vec());
    const double miss2 = norm2(d + tc * v.vec());
    const double r2 = ball.radius * ball.radius;
    if (miss2 > r2) return std::nullopt;
    const double half = std::sqrt(r2 - miss2);
    return std::make_pair(tc - half, tc + half);
}

}  // namespace

RayEvent first_hit(const Scene& scene, const Vector& q, const UnitVector& v, const RaycastOptions& options) {
    const double R = scene.bounding.radius;
    const double t_exit = sphere_exit_time(scene.bounding, q, v);
    const double stride = options.stride_fraction * R;
    const double margin = 1e-9 * R;

    double best_t = t_exit;
    std::optional<std::size_t> best_body;
    long steps = 0;
    try {
        for (std::size_t j = 0; j < scene.bodies.size(); ++j) {
            const ImplicitBody& body = scene.bodies[j];
            BoundingBall bb = body.bounds();
            bb.radius += margin;
            const auto window = ray_ball_interval(bb, q, v);
            if (!window) continue;
            const double lo = std::max(window->first, options.min_time);
            const double hi = std::min(window->second, best_t);
            if (!(lo < hi)) continue;
            Marcher marcher(body, q, v, steps, options.step_budget);
            if (auto t = marcher.march(lo, hi, stride); t && *t < best_t) {
                best_t = *t;
                best_body = j;
            }
        }
    } catch (const BudgetExceeded&) {
        return StepBudgetExhausted{steps};
    }

    if (!best_body) {
        const Vector p = q + t_exit * v.vec();
        const Vector radial = p - scene.bounding.center;
        const double r = norm(radial);
        const Vector on_sphere = r > 0.0 ? scene.bounding.center + (R / r) * radial : p;
        return SphereExit{on_sphere, t_exit};
    }

    const Vector p = q + best_t * v.vec();
    const FieldSample s = scene.bodies[*best_body].sample(p);
    if (!(norm(s.gradient) >= kMinGradientNorm)) return GradientFailure{p, best_t, *best_body};
    HitRecord hit;
    hit.point = p;
    hit.time = best_t;
    hit.body_index = *best_body;
    hit.normal = UnitVector::normalize(s.gradient);
    hit.grazing = std::abs(dot(hit.normal.vec(), v.vec())) < options.grazing_tolerance;
    return hit;
}

}  // namespace billiards
