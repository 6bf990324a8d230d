#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "billiards/vector.hpp"

namespace billiards {

struct FieldSample {
    double value = 0.0;
    Vector gradient;
};

struct BoundingBall {
    Vector center;
    double radius = 0.0;
};

// Smooth bump with compact angular support around `direction`, seen from
// `center`. `width` is the angular half-width in radians.
struct BumpSpec {
    Vector center;
    UnitVector direction;
    double width = 0.5;
};

class ImplicitBody;
using BodyPtr = std::shared_ptr<const ImplicitBody>;

// f(q) = ‖q − center‖ − radius.
struct Ball {
    Vector center;
    double radius = 1.0;
};

// f(q) = a_min · (‖diag(1/a) Rᵀ (q − center)‖ − 1). Scaled by the shortest
// semi-axis so the field is 1-Lipschitz and reduces to the ball distance.
struct Ellipsoid {
    int dimension = 2;
    Vector center;
    Vector semi_axes{1.0, 1.0, 1.0};
    Vector angles;  // yaw, pitch, roll; planar ellipses use yaw only
    Mat3 rotation;
    double min_axis = 1.0;
    double max_axis = 1.0;
};

// f = −κ log Σ exp(−fᵢ/κ)
struct SmoothUnion {
    std::vector<BodyPtr> children;
    double blend = 0.05;
};

// f = κ log (exp(f_base/κ) + Σ exp(−f_cut/κ)), i.e. a smooth max of the base
// field and the negated cut fields.
struct SmoothDifference {
    BodyPtr base;
    std::vector<BodyPtr> cuts;
    double blend = 0.05;
};

// f = f_base − amplitude · bump(angle between q − center and direction)
struct RadialBump {
    BodyPtr base;
    double amplitude = 0.0;
    BumpSpec bump;
};

enum class BodyKind { Ball, Ellipsoid, SmoothUnion, SmoothDifference, RadialBump };

// Obstacle component described by a scalar field: negative strictly inside,
// positive strictly outside, zero on the boundary. Immutable after
// construction; copies share children.
class ImplicitBody {
public:
    using Shape = std::variant<Ball, Ellipsoid, SmoothUnion, SmoothDifference, RadialBump>;

    explicit ImplicitBody(Shape shape);

    double value(const Vector& q) const;
    FieldSample sample(const Vector& q) const;

    BodyKind kind() const { return static_cast<BodyKind>(shape_.index()); }
    const Shape& shape() const { return shape_; }

    // Encloses the whole obstacle {f ≤ 0}.
    const BoundingBall& bounds() const { return bounds_; }
    // Encloses the sub-level set {f ≤ level}.
    BoundingBall bounds_at_level(double level) const;

private:
    Shape shape_;
    BoundingBall bounds_;
};

ImplicitBody make_ball(const Vector& center, double radius);
ImplicitBody make_ellipsoid(int dimension, const Vector& center, const Vector& semi_axes,
                            const Vector& angles = {});
ImplicitBody make_smooth_union(const std::vector<ImplicitBody>& children, double blend);
ImplicitBody make_smooth_difference(const ImplicitBody& base, const std::vector<ImplicitBody>& cuts,
                                    double blend);

// Parameter-wise deep equality (children compared by value).
bool operator==(const ImplicitBody& a, const ImplicitBody& b);

// One member of the family F_ε: a RadialBump whose field is the base field
// minus ε·bump. ε = 0 reproduces the base field bit-exactly.
ImplicitBody perturb(const ImplicitBody& base, double epsilon, const BumpSpec& bump);

inline double eval_body(const ImplicitBody& body, const Vector& q) { return body.value(q); }

inline constexpr double kMinGradientNorm = 1e-8;

// Normalised gradient, pointing out of the obstacle into the billiard
// domain. Throws DegenerateGradient when ‖∇f‖ < 1e-8.
UnitVector inward_normal(const ImplicitBody& body, const Vector& q);

// Exact volume for Ball / Ellipsoid (and an unperturbed RadialBump of one).
std::optional<double> closed_form_volume(const ImplicitBody& body, int dimension);

// True when every vector parameter of the body lives in the given dimension.
bool body_fits_dimension(const ImplicitBody& body, int dimension);

struct PerturbationFamily {
    std::size_t body_index = 0;
    BumpSpec bump;
};

// Obstacles plus the bounding ball M; the billiard domain is closure(M \ K).
struct Scene {
    std::string name;
    int dimension = 2;
    BoundingBall bounding;
    std::vector<ImplicitBody> bodies;
    std::optional<double> min_separation;
    bool strictly_convex_components = false;
    std::optional<PerturbationFamily> perturbation;

    double scale() const { return bounding.radius; }
};

bool operator==(const Scene& a, const Scene& b);

struct ValidationOptions {
    int surface_samples = 4096;
};

// Outermost boundary points along `count` rays cast from the body's bounding
// centre. Directions missing the body (e.g. through an opening) are skipped.
std::vector<Vector> sample_surface(const ImplicitBody& body, int dimension, int count);

// Throws SceneValidationError (or PerturbationTooLarge for perturbed bodies)
// when the scene breaks containment, separation or dimension invariants.
void validate_scene(const Scene& scene, const ValidationOptions& options = {});

// Applies the scene's perturbation family at amplitude ε and validates.
Scene perturb_scene(const Scene& scene, double epsilon, const ValidationOptions& options = {});

double ball_volume(int dimension, double radius);
// Vol_{n−1}(S^{n−1}): 2π for n = 2, 4π for n = 3.
double unit_sphere_area(int dimension);

}  // namespace billiards
