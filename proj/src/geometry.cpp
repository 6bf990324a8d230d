#include "billiards/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "billiards/errors.hpp"

namespace billiards {

UnitVector UnitVector::normalize(const Vector& v) {
    const double n = norm(v);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw std::invalid_argument("cannot normalise a zero or non-finite vector");
    }
    return UnitVector(v * (1.0 / n));
}

Mat3 rotation_from_angles(double yaw, double pitch, double roll) {
    const double cz = std::cos(yaw), sz = std::sin(yaw);
    const double cy = std::cos(pitch), sy = std::sin(pitch);
    const double cx = std::cos(roll), sx = std::sin(roll);
    Mat3 r;
    r.m = {cz * cy, cz * sy * sx - sz * cx, cz * sy * cx + sz * sx,
           sz * cy, sz * sy * sx + cz * cx, sz * sy * cx - cz * sx,
           -sy,     cy * sx,                cy * cx};
    return r;
}

namespace {

BoundingBall enclose(const std::vector<BoundingBall>& balls) {
    Vector lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
              std::numeric_limits<double>::infinity()};
    Vector hi = -lo;
    for (const auto& b : balls) {
        for (std::size_t i = 0; i < 3; ++i) {
            lo[i] = std::min(lo[i], b.center[i] - b.radius);
            hi[i] = std::max(hi[i], b.center[i] + b.radius);
        }
    }
    const Vector center = 0.5 * (lo + hi);
    double radius = 0.0;
    for (const auto& b : balls) radius = std::max(radius, distance(center, b.center) + b.radius);
    return {center, radius};
}

struct Bump {
    double value = 0.0;
    Vector gradient;
};

// exp(1 − 1/(1 − x²)) with x = (1 − cos θ)/(1 − cos w); C^∞, peak 1 at θ = 0,
// identically zero for θ ≥ w.
Bump bump_profile(const BumpSpec& spec, const Vector& q, bool want_gradient) {
    const Vector u = q - spec.center;
    const double rho = norm(u);
    if (rho < 1e-300) return {};
    const double cosang = dot(u, spec.direction.vec()) / rho;
    const double s = 1.0 - cosang;
    const double sw = 1.0 - std::cos(spec.width);
    if (s >= sw) return {};
    const double x = s / sw;
    const double one_minus = 1.0 - x * x;
    Bump b;
    b.value = std::exp(1.0 - 1.0 / one_minus);
    if (want_gradient) {
        const double db_ds = b.value * (-2.0 * x / (sw * one_minus * one_minus));
        // ∇s = −(d − cos θ · û)/ρ
        const Vector grad_s = -(1.0 / rho) * (spec.direction.vec() - (cosang / rho) * u);
        b.gradient = db_ds * grad_s;
    }
    return b;
}

double ellipsoid_scaled_norm(const Ellipsoid& e, const Vector& q, Vector* local) {
    const Vector u = e.rotation.transpose_times(q - e.center);
    double g2 = 0.0;
    for (int i = 0; i < e.dimension; ++i) {
        const double s = u[i] / e.semi_axes[i];
        g2 += s * s;
    }
    if (local) *local = u;
    return std::sqrt(g2);
}

struct ValueVisitor {
    const Vector& q;

    double operator()(const Ball& b) const { return distance(q, b.center) - b.radius; }

    double operator()(const Ellipsoid& e) const {
        return e.min_axis * (ellipsoid_scaled_norm(e, q, nullptr) - 1.0);
    }

    double operator()(const SmoothUnion& u) const {
        double values[16];
        std::vector<double> heap;
        double* f = values;
        if (u.children.size() > 16) {
            heap.resize(u.children.size());
            f = heap.data();
        }
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < u.children.size(); ++i) {
            f[i] = u.children[i]->value(q);
            m = std::min(m, f[i]);
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < u.children.size(); ++i) sum += std::exp(-(f[i] - m) / u.blend);
        return m - u.blend * std::log(sum);
    }

    double operator()(const SmoothDifference& d) const {
        double values[16];
        std::vector<double> heap;
        double* g = values;
        const std::size_t n = d.cuts.size() + 1;
        if (n > 16) {
            heap.resize(n);
            g = heap.data();
        }
        g[0] = d.base->value(q);
        double m = g[0];
        for (std::size_t i = 0; i < d.cuts.size(); ++i) {
            g[i + 1] = -d.cuts[i]->value(q);
            m = std::max(m, g[i + 1]);
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += std::exp((g[i] - m) / d.blend);
        return m + d.blend * std::log(sum);
    }

    double operator()(const RadialBump& r) const {
        const double base = r.base->value(q);
        if (r.amplitude == 0.0) return base;
        return base - r.amplitude * bump_profile(r.bump, q, false).value;
    }
};

struct SampleVisitor {
    const Vector& q;

    FieldSample operator()(const Ball& b) const {
        const Vector d = q - b.center;
        const double n = norm(d);
        FieldSample s;
        s.value = n - b.radius;
        if (n > 0.0) s.gradient = d * (1.0 / n);
        return s;
    }

    FieldSample operator()(const Ellipsoid& e) const {
        Vector u;
        const double g = ellipsoid_scaled_norm(e, q, &u);
        FieldSample s;
        s.value = e.min_axis * (g - 1.0);
        if (g > 0.0) {
            Vector local;
            for (int i = 0; i < e.dimension; ++i) local[i] = u[i] / (e.semi_axes[i] * e.semi_axes[i]);
            s.gradient = (e.min_axis / g) * (e.rotation * local);
        }
        return s;
    }

    FieldSample operator()(const SmoothUnion& u) const {
        std::vector<FieldSample> f(u.children.size());
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < f.size(); ++i) {
            f[i] = u.children[i]->sample(q);
            m = std::min(m, f[i].value);
        }
        double sum = 0.0;
        Vector grad;
        for (const auto& fi : f) {
            const double w = std::exp(-(fi.value - m) / u.blend);
            sum += w;
            grad += w * fi.gradient;
        }
        return {m - u.blend * std::log(sum), grad * (1.0 / sum)};
    }

    FieldSample operator()(const SmoothDifference& d) const {
        std::vector<FieldSample> g(d.cuts.size() + 1);
        g[0] = d.base->sample(q);
        double m = g[0].value;
        for (std::size_t i = 0; i < d.cuts.size(); ++i) {
            const FieldSample c = d.cuts[i]->sample(q);
            g[i + 1] = {-c.value, -c.gradient};
            m = std::max(m, g[i + 1].value);
        }
        double sum = 0.0;
        Vector grad;
        for (const auto& gi : g) {
            const double w = std::exp((gi.value - m) / d.blend);
            sum += w;
            grad += w * gi.gradient;
        }
        return {m + d.blend * std::log(sum), grad * (1.0 / sum)};
    }

    FieldSample operator()(const RadialBump& r) const {
        FieldSample s = r.base->sample(q);
        if (r.amplitude == 0.0) return s;
        const Bump b = bump_profile(r.bump, q, true);
        s.value -= r.amplitude * b.value;
        s.gradient -= r.amplitude * b.gradient;
        return s;
    }
};

struct BoundsVisitor {
    double level;

    BoundingBall operator()(const Ball& b) const { return {b.center, std::max(0.0, b.radius + level)}; }

    BoundingBall operator()(const Ellipsoid& e) const {
        return {e.center, std::max(0.0, e.max_axis * (1.0 + level / e.min_axis))};
    }

    BoundingBall operator()(const SmoothUnion& u) const {
        // soft-min ≥ min fᵢ − κ log m
        const double shift = u.blend * std::log(static_cast<double>(u.children.size()));
        std::vector<BoundingBall> balls;
        for (const auto& c : u.children) balls.push_back(c->bounds_at_level(level + shift));
        return enclose(balls);
    }

    BoundingBall operator()(const SmoothDifference& d) const { return d.base->bounds_at_level(level); }

    BoundingBall operator()(const RadialBump& r) const {
        return r.base->bounds_at_level(level + r.amplitude);
    }
};

void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be positive");
}

void require_finite(const Vector& v, const char* what) {
    if (!is_finite(v)) throw std::invalid_argument(std::string(what) + " must be finite");
}

}  // namespace

ImplicitBody::ImplicitBody(Shape shape) : shape_(std::move(shape)) {
    bounds_ = bounds_at_level(0.0);
}

double ImplicitBody::value(const Vector& q) const { return std::visit(ValueVisitor{q}, shape_); }

FieldSample ImplicitBody::sample(const Vector& q) const { return std::visit(SampleVisitor{q}, shape_); }

BoundingBall ImplicitBody::bounds_at_level(double level) const {
    return std::visit(BoundsVisitor{level}, shape_);
}

ImplicitBody make_ball(const Vector& center, double radius) {
    require_finite(center, "ball center");
    require_positive(radius, "ball radius");
    return ImplicitBody(Ball{center, radius});
}

ImplicitBody make_ellipsoid(int dimension, const Vector& center, const Vector& semi_axes, const Vector& angles) {
    if (dimension != 2 && dimension != 3) throw std::invalid_argument("ellipsoid dimension must be 2 or 3");
    require_finite(center, "ellipsoid center");
    require_finite(angles, "ellipsoid rotation");
    Ellipsoid e;
    e.dimension = dimension;
    e.center = center;
    e.semi_axes = semi_axes;
    e.angles = angles;
    if (dimension == 2) {
        e.semi_axes[2] = 1.0;
        e.angles[1] = 0.0;
        e.angles[2] = 0.0;
    }
    e.min_axis = std::numeric_limits<double>::infinity();
    e.max_axis = 0.0;
    for (int i = 0; i < dimension; ++i) {
        require_positive(e.semi_axes[i], "ellipsoid semi-axis");
        e.min_axis = std::min(e.min_axis, e.semi_axes[i]);
        e.max_axis = std::max(e.max_axis, e.semi_axes[i]);
    }
    e.rotation = rotation_from_angles(e.angles[0], e.angles[1], e.angles[2]);
    return ImplicitBody(e);
}

ImplicitBody make_smooth_union(const std::vector<ImplicitBody>& children, double blend) {
    if (children.empty()) throw std::invalid_argument("smooth union needs at least one child");
    require_positive(blend, "smooth union blend");
    SmoothUnion u;
    u.blend = blend;
    for (const auto& c : children) u.children.push_back(std::make_shared<const ImplicitBody>(c));
    return ImplicitBody(std::move(u));
}

ImplicitBody make_smooth_difference(const ImplicitBody& base, const std::vector<ImplicitBody>& cuts, double blend) {
    if (cuts.empty()) throw std::invalid_argument("smooth difference needs at least one cut");
    require_positive(blend, "smooth difference blend");
    SmoothDifference d;
    d.blend = blend;
    d.base = std::make_shared<const ImplicitBody>(base);
    for (const auto& c : cuts) d.cuts.push_back(std::make_shared<const ImplicitBody>(c));
    return ImplicitBody(std::move(d));
}

ImplicitBody perturb(const ImplicitBody& base, double epsilon, const BumpSpec& bump) {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("perturbation amplitude must be >= 0");
    require_finite(bump.center, "bump center");
    if (!(bump.width > 0.0 && bump.width <= std::numbers::pi)) {
        throw std::invalid_argument("bump width must lie in (0, pi]");
    }
    return ImplicitBody(RadialBump{std::make_shared<const ImplicitBody>(base), epsilon, bump});
}

namespace {

bool same_children(const std::vector<BodyPtr>& a, const std::vector<BodyPtr>& b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                      [](const BodyPtr& x, const BodyPtr& y) { return *x == *y; });
}

bool same_bump(const BumpSpec& a, const BumpSpec& b) {
    return a.center == b.center && a.direction == b.direction && a.width == b.width;
}

}  // namespace

bool operator==(const ImplicitBody& a, const ImplicitBody& b) {
    if (a.kind() != b.kind()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.shape());
            if constexpr (std::is_same_v<T, Ball>) {
                return x.center == y.center && x.radius == y.radius;
            } else if constexpr (std::is_same_v<T, Ellipsoid>) {
                return x.dimension == y.dimension && x.center == y.center && x.semi_axes == y.semi_axes &&
                       x.angles == y.angles;
            } else if constexpr (std::is_same_v<T, SmoothUnion>) {
                return x.blend == y.blend && same_children(x.children, y.children);
            } else if constexpr (std::is_same_v<T, SmoothDifference>) {
                return x.blend == y.blend && *x.base == *y.base && same_children(x.cuts, y.cuts);
            } else {
                return x.amplitude == y.amplitude && same_bump(x.bump, y.bump) && *x.base == *y.base;
            }
        },
        a.shape());
}

bool operator==(const Scene& a, const Scene& b) {
    const bool same_family =
        a.perturbation.has_value() == b.perturbation.has_value() &&
        (!a.perturbation || (a.perturbation->body_index == b.perturbation->body_index &&
                             same_bump(a.perturbation->bump, b.perturbation->bump)));
    return a.name == b.name && a.dimension == b.dimension && a.bounding.center == b.bounding.center &&
           a.bounding.radius == b.bounding.radius && a.bodies == b.bodies && a.min_separation == b.min_separation &&
           a.strictly_convex_components == b.strictly_convex_components && same_family;
}

UnitVector inward_normal(const ImplicitBody& body, const Vector& q) {
    const FieldSample s = body.sample(q);
    const double g = norm(s.gradient);
    if (!(g >= kMinGradientNorm)) throw DegenerateGradient("field gradient vanishes at boundary point");
    return UnitVector::normalize(s.gradient);
}

double ball_volume(int dimension, double radius) {
    return dimension == 2 ? std::numbers::pi * radius * radius
                          : 4.0 / 3.0 * std::numbers::pi * radius * radius * radius;
}

double unit_sphere_area(int dimension) { return dimension == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi; }

std::optional<double> closed_form_volume(const ImplicitBody& body, int dimension) {
    const auto& shape = body.shape();
    if (const auto* b = std::get_if<Ball>(&shape)) return ball_volume(dimension, b->radius);
    if (const auto* e = std::get_if<Ellipsoid>(&shape)) {
        double v = dimension == 2 ? std::numbers::pi : 4.0 / 3.0 * std::numbers::pi;
        for (int i = 0; i < dimension; ++i) v *= e->semi_axes[i];
        return v;
    }
    if (const auto* r = std::get_if<RadialBump>(&shape); r && r->amplitude == 0.0) {
        return closed_form_volume(*r->base, dimension);
    }
    return std::nullopt;
}

bool body_fits_dimension(const ImplicitBody& body, int dimension) {
    auto planar = [&](const Vector& v) { return dimension == 3 || v[2] == 0.0; };
    return std::visit(
        [&](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Ball>) {
                return planar(s.center);
            } else if constexpr (std::is_same_v<T, Ellipsoid>) {
                return s.dimension == dimension && planar(s.center);
            } else if constexpr (std::is_same_v<T, SmoothUnion>) {
                return std::all_of(s.children.begin(), s.children.end(),
                                   [&](const BodyPtr& c) { return body_fits_dimension(*c, dimension); });
            } else if constexpr (std::is_same_v<T, SmoothDifference>) {
                return body_fits_dimension(*s.base, dimension) &&
                       std::all_of(s.cuts.begin(), s.cuts.end(),
                                   [&](const BodyPtr& c) { return body_fits_dimension(*c, dimension); });
            } else {
                return planar(s.bump.center) && planar(s.bump.direction.vec()) &&
                       body_fits_dimension(*s.base, dimension);
            }
        },
        body.shape());
}

std::vector<Vector> sample_surface(const ImplicitBody& body, int dimension, int count) {
    const BoundingBall& bb = body.bounds();
    const double outer = bb.radius * 1.05 + 1e-9;
    constexpr int kSteps = 1024;
    const double step = outer / kSteps;
    std::vector<Vector> points;
    points.reserve(static_cast<std::size_t>(count));
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
        Vector dir;
        if (dimension == 2) {
            const double a = 2.0 * std::numbers::pi * i / count;
            dir = {std::cos(a), std::sin(a), 0.0};
        } else {
            const double z = 1.0 - (2.0 * i + 1.0) / count;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = golden * i;
            dir = {r * std::cos(phi), r * std::sin(phi), z};
        }
        // march inward from outside the body until the field turns non-positive
        double r_out = outer;
        double f_out = body.value(bb.center + r_out * dir);
        for (int k = 1; k <= kSteps; ++k) {
            const double r_in = outer - k * step;
            const double f_in = body.value(bb.center + r_in * dir);
            if (f_out > 0.0 && f_in <= 0.0) {
                double lo = r_in, hi = r_out;
                for (int it = 0; it < 80 && hi - lo > 1e-14 * outer; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (body.value(bb.center + mid * dir) <= 0.0) lo = mid; else hi = mid;
                }
                points.push_back(bb.center + hi * dir);
                break;
            }
            r_out = r_in;
            f_out = f_in;
        }
    }
    return points;
}

namespace {

void validate_structure(const Scene& scene) {
    if (scene.dimension != 2 && scene.dimension != 3) throw SceneValidationError("dimension must be 2 or 3");
    if (!(scene.bounding.radius > 0.0) || !std::isfinite(scene.bounding.radius)) {
        throw SceneValidationError("bounding ball radius must be positive");
    }
    if (!is_finite(scene.bounding.center) || (scene.dimension == 2 && scene.bounding.center[2] != 0.0)) {
        throw SceneValidationError("bounding ball center has the wrong dimension");
    }
    for (std::size_t i = 0; i < scene.bodies.size(); ++i) {
        if (!body_fits_dimension(scene.bodies[i], scene.dimension)) {
            throw SceneValidationError("body " + std::to_string(i) + " mixes dimensions");
        }
    }
    if (scene.min_separation && !(*scene.min_separation > 0.0)) {
        throw SceneValidationError("min_separation must be positive");
    }
    if (scene.perturbation) {
        if (scene.perturbation->body_index >= scene.bodies.size()) {
            throw SceneValidationError("perturbation refers to a missing body");
        }
        const BumpSpec& b = scene.perturbation->bump;
        if (scene.dimension == 2 && (b.center[2] != 0.0 || b.direction[2] != 0.0)) {
            throw SceneValidationError("perturbation bump mixes dimensions");
        }
        if (!(b.width > 0.0 && b.width <= std::numbers::pi)) {
            throw SceneValidationError("perturbation width must lie in (0, pi]");
        }
    }
}

}  // namespace

void validate_scene(const Scene& scene, const ValidationOptions& options) {
    validate_structure(scene);
    const double R = scene.bounding.radius;
    const double limit = R - 1e-6 * R;
    std::vector<std::vector<Vector>> surfaces;
    surfaces.reserve(scene.bodies.size());
    for (std::size_t i = 0; i < scene.bodies.size(); ++i) {
        auto pts = sample_surface(scene.bodies[i], scene.dimension, options.surface_samples);
        if (pts.empty()) throw SceneValidationError("body " + std::to_string(i) + " has an empty zero set");
        for (const auto& p : pts) {
            if (distance(p, scene.bounding.center) > limit) {
                const bool perturbed = scene.bodies[i].kind() == BodyKind::RadialBump;
                const std::string msg = "body " + std::to_string(i) + " reaches the bounding sphere";
                if (perturbed) throw PerturbationTooLarge(msg);
                throw SceneValidationError(msg);
            }
        }
        surfaces.push_back(std::move(pts));
    }
    if (scene.min_separation) {
        const double d = *scene.min_separation;
        const double slack = 1e-9 * R;
        for (std::size_t i = 0; i < surfaces.size(); ++i) {
            double to_sphere = std::numeric_limits<double>::infinity();
            for (const auto& p : surfaces[i]) to_sphere = std::min(to_sphere, R - distance(p, scene.bounding.center));
            if (to_sphere < d - slack) {
                throw SceneValidationError("body " + std::to_string(i) + " is closer than min_separation to the sphere");
            }
            for (std::size_t j = i + 1; j < surfaces.size(); ++j) {
                double best = std::numeric_limits<double>::infinity();
                for (const auto& p : surfaces[i]) {
                    for (const auto& q : surfaces[j]) best = std::min(best, norm2(p - q));
                }
                if (std::sqrt(best) < d - slack) {
                    throw SceneValidationError("bodies " + std::to_string(i) + " and " + std::to_string(j) +
                                               " are closer than min_separation");
                }
            }
        }
    }
}

Scene perturb_scene(const Scene& scene, double epsilon, const ValidationOptions& options) {
    if (!scene.perturbation) throw SceneValidationError("scene declares no perturbation family");
    const auto& fam = *scene.perturbation;
    if (fam.body_index >= scene.bodies.size()) throw SceneValidationError("perturbation refers to a missing body");
    Scene out = scene;
    out.bodies[fam.body_index] = perturb(scene.bodies[fam.body_index], epsilon, fam.bump);
    out.perturbation.reset();
    validate_scene(out, options);
    return out;
}

}  // namespace billiards
