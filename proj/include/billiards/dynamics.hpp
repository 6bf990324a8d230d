#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "billiards/raycast.hpp"

namespace billiards {

struct UnitPhasePoint {
    Vector q;
    UnitVector v;
};

// Censoring caps standing in for infinite travelling times.
struct Caps {
    double t_max = 0.0;
    long k_max = 10000;

    // T_max = 10³·R, k_max = 10⁴.
    static Caps defaults_for(const Scene& scene) { return {1e3 * scene.scale(), 10000}; }
};

enum class CapHit { TimeCap, ReflectionCap };
enum class DegenerateReason { Grazing, StepBudget, GradientFailure };

const char* to_string(CapHit cap);
const char* to_string(DegenerateReason reason);

struct Exited {
    double travel_time = 0.0;
    long reflections = 0;
    UnitPhasePoint exit;  // on ∂M, pointing outward
};

// elapsed is min(t(x), T_max) for time-capped runs, so it is non-decreasing
// in T_max trajectory by trajectory.
struct Censored {
    double elapsed = 0.0;
    long reflections = 0;
    CapHit cap = CapHit::TimeCap;
};

struct Degenerate {
    DegenerateReason reason = DegenerateReason::Grazing;
    double elapsed = 0.0;
    long reflections = 0;
};

using TraceOutcome = std::variant<Exited, Censored, Degenerate>;

// σ_ν(v) = v − 2⟨ν, v⟩ν
UnitVector reflect(const UnitVector& v, const UnitVector& normal);

// Inward unit normal of the bounding sphere at q (pointing to the centre).
UnitVector sphere_inward_normal(const BoundingBall& ball, const Vector& q);

struct BoundaryState {
    UnitPhasePoint x;
    // -1 for the bounding sphere, otherwise the obstacle index.
    long component = -1;
};

// Billiard ball map on the whole boundary ∂Ω = ∂M ∪ ∂K: fly to the next
// boundary point (obstacle or sphere) and reflect there. Returns
// Degenerate on a grazing hit or raycast failure.
std::variant<BoundaryState, Degenerate> billiard_map(const Scene& scene, const UnitPhasePoint& x,
                                                    const RaycastOptions& options = {});

// Receives each free-flight segment of a traced trajectory.
struct SegmentSink {
    virtual ~SegmentSink() = default;
    virtual void on_segment(const Vector& start, const UnitVector& direction, double length) = 0;
    virtual void on_reflection(const Vector& /*point*/) {}
};

// Follows the trajectory entering at x ∈ S⁺(∂M) until it exits through ∂M,
// hits a cap, or degenerates.
TraceOutcome trace(const Scene& scene, const UnitPhasePoint& entry, const Caps& caps,
                   const RaycastOptions& options = {}, SegmentSink* sink = nullptr);

// Reflection points visited by a trajectory, in order.
struct TracedPath {
    TraceOutcome outcome;
    std::vector<Vector> reflections;
};

TracedPath trace_path(const Scene& scene, const UnitPhasePoint& entry, const Caps& caps,
                      const RaycastOptions& options = {});

// Re-traces from (exit.q, −exit.v) and compares the reversed reflection
// sequence (and the final exit against the original entry point). Returns
// the maximum pointwise deviation; throws ReversalMismatch above 1e-6·R or
// when the reflection counts differ.
double time_reverse_check(const Scene& scene, const Exited& outcome, const UnitPhasePoint& entry, const Caps& caps,
                          const RaycastOptions& options = {});

// ∫₀^{t(x)} f(φ_t(x)) dt along one trajectory, five-point Gauss–Legendre per
// free-flight segment.
using PhaseIntegrand = std::function<double(const Vector& q, const UnitVector& v)>;

struct PathIntegral {
    TraceOutcome outcome;
    double value = 0.0;
};

PathIntegral integrate_along(const Scene& scene, const UnitPhasePoint& entry, const Caps& caps,
                             const PhaseIntegrand& integrand, const RaycastOptions& options = {});

}  // namespace billiards
