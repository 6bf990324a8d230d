#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "billiards/estimate.hpp"
#include "billiards/measure.hpp"

namespace billiards {

struct RunParams {
    std::uint64_t seed = 1;
    std::uint64_t samples = 1'000'000;
    std::optional<Caps> caps;  // defaults to Caps::defaults_for(scene)
    int workers = 0;
    RaycastOptions ray;
    VolumeOptions volume;

    Caps caps_for(const Scene& scene) const { return caps.value_or(Caps::defaults_for(scene)); }
};

enum class SampleStatus : std::uint8_t { Exited, Censored, Degenerate };

// Compact per-trajectory result. `time` is the travelling time, the censored
// elapsed time, or the elapsed time at degeneration.
struct SampleRecord {
    double time = 0.0;
    std::int32_t reflections = 0;
    SampleStatus status = SampleStatus::Exited;
    std::uint8_t detail = 0;  // CapHit or DegenerateReason

    friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

SampleRecord to_record(const TraceOutcome& outcome);

struct SampleSet {
    std::vector<SampleRecord> records;
    Caps caps;
    std::uint64_t seed = 0;

    std::uint64_t count(SampleStatus status) const;
};

// Traces N Liouville-distributed entries. collect_samples runs the OpenMP
// kernel; collect_samples_serial is the single-threaded reference. Both
// produce identical records for identical (scene, seed, N, caps).
SampleSet collect_samples(const Scene& scene, const RunParams& params);
SampleSet collect_samples_serial(const Scene& scene, const RunParams& params);

// The sample set a run with the lower time cap would have produced,
// derived trajectory by trajectory. Times and statuses match a direct rerun
// exactly; re-censored records keep their uncapped reflection count, which
// no estimator reads for censored samples.
SampleSet recap(const SampleSet& samples, double t_cap);

// μ-integral of the travelling time over S⁺(∂M); censored samples
// contribute their elapsed time, degenerate samples are excluded.
Estimate travel_time_integral(const Scene& scene, const SampleSet& samples);
Estimate travel_time_integral(const Scene& scene, const RunParams& params);

struct SantaloCheck {
    Estimate integral;
    Estimate lambda_total;
    double z_score = 0.0;  // |integral − λ| / combined std error
    bool pass = false;     // z ≤ 3
};

SantaloCheck santalo_check(const Scene& scene, const SampleSet& samples, const Estimate& lambda);
SantaloCheck santalo_check(const Scene& scene, const RunParams& params);

// Vol_n(K) = Vol_n(M) − ∫ t dμ / Vol_{n−1}(S^{n−1}), evaluated as
// ∫ (c − t) dμ / Vol_{n−1}(S^{n−1}) with c the empty-ball chord of the same
// entry (the records must come from collect_samples, index for index).
Estimate recover_volume(const Scene& scene, const SampleSet& samples);
Estimate recover_volume(const Scene& scene, const RunParams& params);

// λ(Trap) = λ(S(Ω)) − ∫ t dμ at the run cap and at half the cap. Censoring
// makes both upper bounds; the gap shows cap convergence.
struct TrappedMeasure {
    Estimate at_cap;
    Estimate at_half_cap;
};

TrappedMeasure trapped_measure(const Scene& scene, const SampleSet& samples, const Estimate& lambda);
TrappedMeasure trapped_measure(const Scene& scene, const RunParams& params);

struct ReflectionHistogram {
    std::vector<std::uint64_t> counts;  // exited samples with exactly k reflections
    std::uint64_t n_samples = 0;
    std::uint64_t n_censored = 0;
    std::uint64_t n_degenerate = 0;
    double mu_total = 0.0;
    Caps caps;
    std::uint64_t seed = 0;

    double weighted_sum = 0.0;  // Σ (k+1) μ̂(Γ_k)
    double weighted_sum_std_error = 0.0;
    Estimate lambda_total;
    double diameter = 0.0;
    double lower_bound = 0.0;                // λ / D
    std::optional<double> upper_bound;       // λ / d
    bool lower_holds = true;
    std::optional<bool> upper_holds;
    double decay_constant = 0.0;             // max_k (k+1) μ̂(Γ_k)

    double mu_gamma(std::size_t k) const;
    double mu_censored() const;
    double mu_degenerate() const;
    // Count-level identity Σ_k |Γ_k| + censored + degenerate = N.
    bool bookkeeping_exact() const;
};

ReflectionHistogram build_reflection_histogram(const Scene& scene, const SampleSet& samples, const Estimate& lambda);
// Throws BoundViolation if a bound fails beyond 3σ slack.
void check_reflection_bounds(const ReflectionHistogram& histogram);
ReflectionHistogram reflection_histogram(const Scene& scene, const RunParams& params);

struct ComponentCount {
    double fractional = 0.0;
    double std_error = 0.0;
    long rounded = 0;
};

// k = Vol_n(K) / (π^{n/2} aⁿ / Γ(n/2 + 1)).
ComponentCount count_components(const Estimate& volume, double radius, int dimension);

struct SweepRow {
    double epsilon = 0.0;
    TrappedMeasure trapped;
    double deviation = 0.0;  // |value(ε) − value(0)| at the run cap
};

// Trapped measure along the scene's perturbation family with a shared seed.
// The ε list must contain 0.
std::vector<SweepRow> perturbation_sweep(const Scene& scene, std::span<const double> epsilons,
                                         const RunParams& params);

// Right-hand side of the generalised Santalo identity for an arbitrary
// integrand: μ-integral of ∫₀^{t(x)} f(φ_t(x)) dt.
Estimate phase_space_integral(const Scene& scene, const RunParams& params, const PhaseIntegrand& integrand);

}  // namespace billiards
