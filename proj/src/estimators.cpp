#include "billiards/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "billiards/errors.hpp"
#include "billiards/parallel.hpp"

namespace billiards {

SampleRecord to_record(const TraceOutcome& outcome) {
    SampleRecord r;
    if (const auto* e = std::get_if<Exited>(&outcome)) {
        r.time = e->travel_time;
        r.reflections = static_cast<std::int32_t>(e->reflections);
        r.status = SampleStatus::Exited;
    } else if (const auto* c = std::get_if<Censored>(&outcome)) {
        r.time = c->elapsed;
        r.reflections = static_cast<std::int32_t>(c->reflections);
        r.status = SampleStatus::Censored;
        r.detail = static_cast<std::uint8_t>(c->cap);
    } else {
        const auto& d = std::get<Degenerate>(outcome);
        r.time = d.elapsed;
        r.reflections = static_cast<std::int32_t>(d.reflections);
        r.status = SampleStatus::Degenerate;
        r.detail = static_cast<std::uint8_t>(d.reason);
    }
    return r;
}

std::uint64_t SampleSet::count(SampleStatus status) const {
    return static_cast<std::uint64_t>(
        std::count_if(records.begin(), records.end(), [&](const SampleRecord& r) { return r.status == status; }));
}

SampleSet recap(const SampleSet& samples, double t_cap) {
    if (!(t_cap > 0.0) || t_cap > samples.caps.t_max) throw std::invalid_argument("recap needs 0 < cap <= run cap");
    SampleSet out = samples;
    out.caps.t_max = t_cap;
    for (auto& r : out.records) {
        // every status records the elapsed time at which the run would have
        // checked the cap, so exceeding the new cap means time-censored there
        if (r.time > t_cap) {
            r.time = t_cap;
            r.status = SampleStatus::Censored;
            r.detail = static_cast<std::uint8_t>(CapHit::TimeCap);
        }
    }
    return out;
}

namespace {

struct MeanAndError {
    double mean = 0.0;
    double std_error = 0.0;
};

MeanAndError mean_and_error(const std::vector<double>& values) {
    if (values.empty()) return {};
    const double n = static_cast<double>(values.size());
    const double mean = pairwise_sum(values) / n;
    std::vector<double> sq(values.size());
    std::transform(values.begin(), values.end(), sq.begin(), [&](double v) { return (v - mean) * (v - mean); });
    const double var = values.size() > 1 ? pairwise_sum(sq) / (n - 1.0) : 0.0;
    return {mean, std::sqrt(var / n)};
}

Estimate stamp(const SampleSet& samples) {
    Estimate e;
    e.n_samples = samples.records.size();
    e.n_censored = samples.count(SampleStatus::Censored);
    e.n_degenerate = samples.count(SampleStatus::Degenerate);
    e.caps = samples.caps;
    e.seed = samples.seed;
    return e;
}

Estimate combine_difference(const Estimate& base, double value, double err_a, double err_b) {
    Estimate e = base;
    e.value = value;
    e.std_error = std::hypot(err_a, err_b);
    return e;
}

}  // namespace

Estimate travel_time_integral(const Scene& scene, const SampleSet& samples) {
    std::vector<double> times;
    times.reserve(samples.records.size());
    for (const auto& r : samples.records) {
        if (r.status != SampleStatus::Degenerate) times.push_back(r.time);
    }
    const MeanAndError m = mean_and_error(times);
    const double mu = mu_total(scene);
    Estimate e = stamp(samples);
    e.value = mu * m.mean;
    e.std_error = mu * m.std_error;
    return e;
}

Estimate travel_time_integral(const Scene& scene, const RunParams& params) {
    return travel_time_integral(scene, collect_samples(scene, params));
}

SantaloCheck santalo_check(const Scene& scene, const SampleSet& samples, const Estimate& lambda) {
    SantaloCheck check;
    check.integral = travel_time_integral(scene, samples);
    check.lambda_total = lambda;
    const double sigma = std::hypot(check.integral.std_error, lambda.std_error);
    const double gap = std::abs(check.integral.value - lambda.value);
    check.z_score = sigma > 0.0 ? gap / sigma : (gap == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    check.pass = check.z_score <= 3.0;
    return check;
}

SantaloCheck santalo_check(const Scene& scene, const RunParams& params) {
    return santalo_check(scene, collect_samples(scene, params), lambda_total(scene, params.volume));
}

Estimate recover_volume(const Scene& scene, const SampleSet& samples) {
    // Vol(M)·|S| is the empty-scene integral of the chord length c(x), so
    // Vol(K)·|S| = ∫ (c − t) dμ. The integrand vanishes on every entry that
    // misses K, which removes almost all of the variance of ∫ t dμ.
    const LiouvilleSampler sampler(scene, samples.seed);
    std::vector<double> deficits;
    deficits.reserve(samples.records.size());
    for (std::size_t i = 0; i < samples.records.size(); ++i) {
        const auto& r = samples.records[i];
        if (r.status == SampleStatus::Degenerate) continue;
        const auto x = sampler.sample_entry(static_cast<std::uint64_t>(i));
        deficits.push_back(sphere_exit_time(scene.bounding, x.q, x.v) - r.time);
    }
    const MeanAndError m = mean_and_error(deficits);
    const double scale = mu_total(scene) / unit_sphere_area(scene.dimension);
    Estimate e = stamp(samples);
    e.value = scale * m.mean;
    e.std_error = scale * m.std_error;
    return e;
}

Estimate recover_volume(const Scene& scene, const RunParams& params) {
    return recover_volume(scene, collect_samples(scene, params));
}

TrappedMeasure trapped_measure(const Scene& scene, const SampleSet& samples, const Estimate& lambda) {
    auto at = [&](const SampleSet& s) {
        const Estimate integral = travel_time_integral(scene, s);
        return combine_difference(integral, lambda.value - integral.value, lambda.std_error, integral.std_error);
    };
    return {at(samples), at(recap(samples, 0.5 * samples.caps.t_max))};
}

TrappedMeasure trapped_measure(const Scene& scene, const RunParams& params) {
    return trapped_measure(scene, collect_samples(scene, params), lambda_total(scene, params.volume));
}

double ReflectionHistogram::mu_gamma(std::size_t k) const {
    if (k >= counts.size() || n_samples == 0) return 0.0;
    return mu_total * static_cast<double>(counts[k]) / static_cast<double>(n_samples);
}

double ReflectionHistogram::mu_censored() const {
    return n_samples ? mu_total * static_cast<double>(n_censored) / static_cast<double>(n_samples) : 0.0;
}

double ReflectionHistogram::mu_degenerate() const {
    return n_samples ? mu_total * static_cast<double>(n_degenerate) / static_cast<double>(n_samples) : 0.0;
}

bool ReflectionHistogram::bookkeeping_exact() const {
    std::uint64_t total = n_censored + n_degenerate;
    for (auto c : counts) total += c;
    return total == n_samples;
}

ReflectionHistogram build_reflection_histogram(const Scene& scene, const SampleSet& samples, const Estimate& lambda) {
    ReflectionHistogram h;
    h.n_samples = samples.records.size();
    h.mu_total = mu_total(scene);
    h.caps = samples.caps;
    h.seed = samples.seed;
    std::vector<double> weights(samples.records.size(), 0.0);
    for (std::size_t i = 0; i < samples.records.size(); ++i) {
        const auto& r = samples.records[i];
        switch (r.status) {
            case SampleStatus::Exited: {
                const auto k = static_cast<std::size_t>(r.reflections);
                if (k >= h.counts.size()) h.counts.resize(k + 1, 0);
                ++h.counts[k];
                weights[i] = static_cast<double>(k + 1);
                break;
            }
            case SampleStatus::Censored: ++h.n_censored; break;
            case SampleStatus::Degenerate: ++h.n_degenerate; break;
        }
    }
    const MeanAndError m = mean_and_error(weights);
    h.weighted_sum = h.mu_total * m.mean;
    h.weighted_sum_std_error = h.mu_total * m.std_error;
    for (std::size_t k = 0; k < h.counts.size(); ++k) {
        h.decay_constant = std::max(h.decay_constant, static_cast<double>(k + 1) * h.mu_gamma(k));
    }

    h.lambda_total = lambda;
    h.diameter = 2.0 * scene.bounding.radius;
    h.lower_bound = lambda.value / h.diameter;
    const double slack_s = 3.0 * h.weighted_sum_std_error;
    h.lower_holds = h.lower_bound - 3.0 * lambda.std_error / h.diameter <= h.weighted_sum + slack_s;
    if (scene.min_separation && scene.strictly_convex_components) {
        const double d = *scene.min_separation;
        h.upper_bound = lambda.value / d;
        h.upper_holds = h.weighted_sum - slack_s <= *h.upper_bound + 3.0 * lambda.std_error / d;
    }
    return h;
}

void check_reflection_bounds(const ReflectionHistogram& h) {
    if (!h.lower_holds) {
        std::ostringstream msg;
        msg << "lower reflection bound violated: lambda/D = " << h.lower_bound << " > S = " << h.weighted_sum;
        throw BoundViolation(msg.str());
    }
    if (h.upper_holds && !*h.upper_holds) {
        std::ostringstream msg;
        msg << "upper reflection bound violated: S = " << h.weighted_sum << " > lambda/d = " << *h.upper_bound;
        throw BoundViolation(msg.str());
    }
}

ReflectionHistogram reflection_histogram(const Scene& scene, const RunParams& params) {
    ReflectionHistogram h =
        build_reflection_histogram(scene, collect_samples(scene, params), lambda_total(scene, params.volume));
    check_reflection_bounds(h);
    return h;
}

ComponentCount count_components(const Estimate& volume, double radius, int dimension) {
    if (!(radius > 0.0)) throw std::invalid_argument("component radius must be positive");
    const double n = static_cast<double>(dimension);
    const double unit = std::pow(std::numbers::pi, n / 2.0) * std::pow(radius, n) / std::tgamma(n / 2.0 + 1.0);
    ComponentCount c;
    c.fractional = volume.value / unit;
    c.std_error = volume.std_error / unit;
    c.rounded = std::lround(c.fractional);
    return c;
}

std::vector<SweepRow> perturbation_sweep(const Scene& scene, std::span<const double> epsilons,
                                         const RunParams& params) {
    if (std::find(epsilons.begin(), epsilons.end(), 0.0) == epsilons.end()) {
        throw std::invalid_argument("perturbation sweep needs epsilon = 0 in its list");
    }
    std::vector<SweepRow> rows;
    rows.reserve(epsilons.size());
    for (double eps : epsilons) {
        const Scene perturbed = perturb_scene(scene, eps);
        RunParams p = params;
        p.caps = params.caps_for(scene);
        rows.push_back({eps, trapped_measure(perturbed, p), 0.0});
    }
    const auto base = std::find_if(rows.begin(), rows.end(), [](const SweepRow& r) { return r.epsilon == 0.0; });
    const double reference = base->trapped.at_cap.value;
    for (auto& r : rows) r.deviation = std::abs(r.trapped.at_cap.value - reference);
    return rows;
}

Estimate phase_space_integral(const Scene& scene, const RunParams& params, const PhaseIntegrand& integrand) {
    const Caps caps = params.caps_for(scene);
    const LiouvilleSampler sampler(scene, params.seed);
    const auto n = static_cast<std::int64_t>(params.samples);
    std::vector<double> values(params.samples, 0.0);
    std::vector<SampleRecord> records(params.samples);
#pragma omp parallel for schedule(dynamic, 256) num_threads(resolve_workers(params.workers))
    for (std::int64_t i = 0; i < n; ++i) {
        const PathIntegral pi =
            integrate_along(scene, sampler.sample_entry(static_cast<std::uint64_t>(i)), caps, integrand, params.ray);
        records[static_cast<std::size_t>(i)] = to_record(pi.outcome);
        values[static_cast<std::size_t>(i)] = pi.value;
    }
    std::vector<double> kept;
    kept.reserve(values.size());
    SampleSet set{std::move(records), caps, params.seed};
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (set.records[i].status != SampleStatus::Degenerate) kept.push_back(values[i]);
    }
    const MeanAndError m = mean_and_error(kept);
    const double mu = mu_total(scene);
    Estimate e = stamp(set);
    e.value = mu * m.mean;
    e.std_error = mu * m.std_error;
    return e;
}

}  // namespace billiards
