#include "billiards/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "billiards/errors.hpp"

namespace billiards {

const char* to_string(CapHit cap) { return cap == CapHit::TimeCap ? "time_cap" : "reflection_cap"; }

const char* to_string(DegenerateReason reason) {
    switch (reason) {
        case DegenerateReason::Grazing: return "grazing";
        case DegenerateReason::StepBudget: return "step_budget";
        case DegenerateReason::GradientFailure: return "gradient_failure";
    }
    return "unknown";
}

UnitVector reflect(const UnitVector& v, const UnitVector& normal) {
    const double c = dot(v.vec(), normal.vec());
    return UnitVector::renormalize(v.vec() - (2.0 * c) * normal.vec());
}

UnitVector sphere_inward_normal(const BoundingBall& ball, const Vector& q) {
    return UnitVector::normalize(ball.center - q);
}

std::variant<BoundaryState, Degenerate> billiard_map(const Scene& scene, const UnitPhasePoint& x,
                                                    const RaycastOptions& options) {
    const RayEvent ev = first_hit(scene, x.q, x.v, options);
    if (const auto* exit = std::get_if<SphereExit>(&ev)) {
        const UnitVector nu = sphere_inward_normal(scene.bounding, exit->point);
        if (std::abs(dot(nu.vec(), x.v.vec())) < options.grazing_tolerance) {
            return Degenerate{DegenerateReason::Grazing, exit->time, 0};
        }
        return BoundaryState{{exit->point, reflect(x.v, nu)}, -1};
    }
    if (const auto* hit = std::get_if<HitRecord>(&ev)) {
        if (hit->grazing) return Degenerate{DegenerateReason::Grazing, hit->time, 0};
        return BoundaryState{{hit->point, reflect(x.v, hit->normal)}, static_cast<long>(hit->body_index)};
    }
    if (const auto* g = std::get_if<GradientFailure>(&ev)) {
        return Degenerate{DegenerateReason::GradientFailure, g->time, 0};
    }
    return Degenerate{DegenerateReason::StepBudget, 0.0, 0};
}

TraceOutcome trace(const Scene& scene, const UnitPhasePoint& entry, const Caps& caps, const RaycastOptions& options,
                   SegmentSink* sink) {
    Vector q = entry.q;
    UnitVector v = entry.v;
    double elapsed = 0.0;
    long reflections = 0;

    auto censor_at_time_cap = [&]() -> TraceOutcome {
        if (sink) sink->on_segment(q, v, caps.t_max - elapsed);
        return Censored{caps.t_max, reflections, CapHit::TimeCap};
    };

    for (;;) {
        const RayEvent ev = first_hit(scene, q, v, options);
        if (const auto* exit = std::get_if<SphereExit>(&ev)) {
            if (elapsed + exit->time > caps.t_max) return censor_at_time_cap();
            if (sink) sink->on_segment(q, v, exit->time);
            return Exited{elapsed + exit->time, reflections, {exit->point, v}};
        }
        if (const auto* hit = std::get_if<HitRecord>(&ev)) {
            if (elapsed + hit->time > caps.t_max) return censor_at_time_cap();
            if (sink) sink->on_segment(q, v, hit->time);
            elapsed += hit->time;
            if (hit->grazing) return Degenerate{DegenerateReason::Grazing, elapsed, reflections};
            if (reflections >= caps.k_max) return Censored{elapsed, reflections, CapHit::ReflectionCap};
            ++reflections;
            v = reflect(v, hit->normal);
            q = hit->point;
            if (sink) sink->on_reflection(q);
            continue;
        }
        if (std::holds_alternative<GradientFailure>(ev)) {
            return Degenerate{DegenerateReason::GradientFailure, elapsed, reflections};
        }
        return Degenerate{DegenerateReason::StepBudget, elapsed, reflections};
    }
}

namespace {

struct PathRecorder final : SegmentSink {
    std::vector<Vector> points;
    void on_segment(const Vector&, const UnitVector&, double) override {}
    void on_reflection(const Vector& p) override { points.push_back(p); }
};

struct QuadratureSink final : SegmentSink {
    const PhaseIntegrand& f;
    double total = 0.0;

    explicit QuadratureSink(const PhaseIntegrand& integrand) : f(integrand) {}

    void on_segment(const Vector& start, const UnitVector& dir, double length) override {
        static constexpr std::array<double, 5> nodes{0.0, -0.5384693101056831, 0.5384693101056831,
                                                     -0.9061798459386640, 0.9061798459386640};
        static constexpr std::array<double, 5> weights{0.5688888888888889, 0.4786286704993665,
                                                       0.4786286704993665, 0.2369268850561891,
                                                       0.2369268850561891};
        const double half = 0.5 * length;
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            acc += weights[i] * f(start + (half * (1.0 + nodes[i])) * dir.vec(), dir);
        }
        total += half * acc;
    }
};

}  // namespace

TracedPath trace_path(const Scene& scene, const UnitPhasePoint& entry, const Caps& caps,
                      const RaycastOptions& options) {
    PathRecorder rec;
    TraceOutcome outcome = trace(scene, entry, caps, options, &rec);
    return {outcome, std::move(rec.points)};
}

double time_reverse_check(const Scene& scene, const Exited& outcome, const UnitPhasePoint& entry, const Caps& caps,
                          const RaycastOptions& options) {
    const double tolerance = 1e-6 * scene.scale();
    const TracedPath forward = trace_path(scene, entry, caps, options);
    const auto* fwd = std::get_if<Exited>(&forward.outcome);
    if (!fwd || fwd->reflections != outcome.reflections) {
        throw ReversalMismatch("forward re-trace does not reproduce the exited outcome");
    }
    const UnitPhasePoint reversed{outcome.exit.q, -outcome.exit.v};
    const TracedPath backward = trace_path(scene, reversed, caps, options);
    const auto* bwd = std::get_if<Exited>(&backward.outcome);
    if (!bwd || bwd->reflections != fwd->reflections) {
        std::ostringstream msg;
        msg << "reversed trajectory has " << (bwd ? bwd->reflections : -1) << " reflections, forward had "
            << fwd->reflections;
        throw ReversalMismatch(msg.str());
    }
    double deviation = distance(bwd->exit.q, entry.q);
    const std::size_t k = forward.reflections.size();
    for (std::size_t i = 0; i < k; ++i) {
        deviation = std::max(deviation, distance(forward.reflections[k - 1 - i], backward.reflections[i]));
    }
    if (deviation > tolerance) {
        std::ostringstream msg;
        msg << "time reversal deviates by " << deviation;
        throw ReversalMismatch(msg.str());
    }
    return deviation;
}

PathIntegral integrate_along(const Scene& scene, const UnitPhasePoint& entry, const Caps& caps,
                             const PhaseIntegrand& integrand, const RaycastOptions& options) {
    QuadratureSink sink(integrand);
    TraceOutcome outcome = trace(scene, entry, caps, options, &sink);
    return {outcome, sink.total};
}

}  // namespace billiards
