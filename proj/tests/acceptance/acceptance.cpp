// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Full-size runs (N = 10⁶); about two minutes on one core.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "billiards/cli.hpp"
#include "billiards/diagnostics.hpp"
#include "billiards/errors.hpp"
#include "billiards/estimators.hpp"
#include "billiards/scene_io.hpp"

using namespace billiards;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kN = 1'000'000;
constexpr std::uint64_t kSeed = 1;

// Frozen from the first full run (seed 1, N = 10⁶, default caps). A change
// beyond 3σ means the dynamics or the sampler changed.
constexpr double kLivshitsBaseline = 5.610372;

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RunParams params(std::uint64_t n = kN) {
    RunParams p;
    p.samples = n;
    p.seed = kSeed;
    return p;
}

Verdict c1_santalo_empty() {
    const Scene s = bundled_scene("disk_empty");
    RunParams p = params();
    p.workers = 1;
    const auto t0 = std::chrono::steady_clock::now();
    const auto check = santalo_check(s, p);
    const double dt = seconds_since(t0);
    const double lambda = 2 * kPi * kPi;
    const double gap = std::abs(check.integral.value - lambda);
    const bool ok = gap <= 3 * check.integral.std_error && dt <= 30.0 && check.lambda_total.value == lambda;
    return {ok, fmt("integral %.6f vs 2π² = %.6f, |Δ|/σ = %.2f, mean chord %.6f (π/2 = %.6f), %.1f s single-threaded",
                    check.integral.value, lambda, gap / check.integral.std_error,
                    check.integral.value / (4 * kPi), kPi / 2, dt)};
}

Verdict c2_volume() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto v2 = recover_volume(bundled_scene("single_ball"), params());
    const auto v3 = recover_volume(bundled_scene("single_ball_3d"), params());
    const double dt = seconds_since(t0);
    const double e2 = kPi / 4, e3 = 4.0 / 3.0 * kPi * 0.125;
    const double z2 = std::abs(v2.value - e2) / v2.std_error, z3 = std::abs(v3.value - e3) / v3.std_error;
    const double r2 = v2.std_error / v2.value, r3 = v3.std_error / v3.value;
    const bool ok = z2 <= 3 && z3 <= 3 && r2 <= 0.02 && r3 <= 0.02 && dt <= 120.0;
    return {ok, fmt("n=2: %.5f ± %.5f (π/4, %.2fσ, σ/V %.2f%%); n=3: %.5f ± %.5f (π/6, %.2fσ, σ/V %.2f%%); %.1f s",
                    v2.value, v2.std_error, z2, 100 * r2, v3.value, v3.std_error, z3, 100 * r3, dt)};
}

Verdict c3_convex_not_trapped() {
    const Scene s = bundled_scene("two_disks");
    RunParams p = params();
    p.caps = Caps{1000.0, Caps::defaults_for(s).k_max};
    const auto t = trapped_measure(s, p);
    const double frac = static_cast<double>(t.at_cap.n_censored) / static_cast<double>(t.at_cap.n_samples);
    const double bound = 3 * t.at_cap.std_error + mu_total(s) * frac * 1000.0;
    const bool ok = std::abs(t.at_cap.value) <= bound && frac <= 1e-4 && !t.at_cap.unreliable();
    return {ok, fmt("λ(Trap) %.4f ± %.4f, bound %.4f, censored fraction %.2e, degenerate %llu", t.at_cap.value,
                    t.at_cap.std_error, bound, frac, static_cast<unsigned long long>(t.at_cap.n_degenerate))};
}

Verdict c4_cavity_trapped() {
    const Scene s = bundled_scene("livshits_cavity");
    const auto t = trapped_measure(s, params());
    const double v = t.at_cap.value, se = t.at_cap.std_error;
    const double change = std::abs(v - t.at_half_cap.value) / v;
    bool ok = v > 5 * se && change < 0.10 && !t.at_cap.unreliable();
    const double z = std::abs(v - kLivshitsBaseline) / se;
    ok = ok && z <= 3;
    const std::string base = fmt("baseline %.6f (%.2fσ)", kLivshitsBaseline, z);
    return {ok, fmt("λ(Trap) %.6f ± %.6f (%.1fσ), T_max %.0f vs %.0f: %.3f%% change, %s", v, se, v / se,
                    t.at_cap.caps.t_max, t.at_half_cap.caps.t_max, 100 * change, base.c_str())};
}

Verdict c5_reflection_bounds() {
    const Scene s = bundled_scene("two_disks");
    const auto h = reflection_histogram(s, params());
    double buckets = h.mu_censored() + h.mu_degenerate();
    for (std::size_t k = 0; k < h.counts.size(); ++k) buckets += h.mu_gamma(k);
    const double slack = 3 * std::hypot(h.weighted_sum_std_error, h.lambda_total.std_error);
    const double lower = h.lambda_total.value / (2 * s.scale());
    const double upper = h.lambda_total.value / *s.min_separation;
    const bool ok = h.bookkeeping_exact() && std::abs(buckets - h.mu_total) <= 1e-9 * h.mu_total &&
                    h.weighted_sum + slack >= lower && h.weighted_sum - slack <= upper;
    return {ok, fmt("%.3f ≤ Σ(k+1)μ̂(Γ_k) = %.3f ± %.3f ≤ %.3f; Σ buckets %.9f vs mu_total %.9f; k ≤ %zu", lower,
                    h.weighted_sum, h.weighted_sum_std_error, upper, buckets, h.mu_total, h.counts.size() - 1)};
}

Verdict c6_ball_count() {
    const Scene s = bundled_scene("five_balls");
    const auto v = recover_volume(s, params());
    const auto c = count_components(v, 0.3, 2);
    const bool ok = c.rounded == 5 && std::abs(c.fractional - 5.0) < 0.5;
    return {ok, fmt("volume %.5f ± %.5f → k = %.4f ± %.4f, rounded %ld", v.value, v.std_error, c.fractional,
                    c.std_error, c.rounded)};
}

Verdict c7_dynamics() {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    double worst_involution = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const auto v = UnitVector::normalize({g(rng), g(rng), g(rng)});
        const auto n = UnitVector::normalize({g(rng), g(rng), g(rng)});
        worst_involution = std::max(worst_involution, distance(reflect(reflect(v, n), n).vec(), v.vec()));
    }
    bool ok = worst_involution <= 1e-12;
    std::string detail = fmt("involution %.1e", worst_involution);

    for (const auto& name : bundled_scene_names()) {
        const Scene s = bundled_scene(name);
        try {
            const auto r = time_reversal_sweep(s, 1000, kSeed, Caps::defaults_for(s));
            const bool pass = r.checked == 1000 && r.max_deviation <= 1e-6 * s.scale();
            ok = ok && pass;
            detail += fmt("; %s %.1e·R", name.c_str(), r.max_deviation / s.scale());
        } catch (const ReversalMismatch& e) {
            ok = false;
            detail += fmt("; %s mismatch: %s", name.c_str(), e.what());
        }
    }

    const auto inv = map_invariance_test(bundled_scene("two_disks"), kN, kSeed);
    ok = ok && inv.p_value_source > 0.001 && inv.p_value_image > 0.001;
    detail += fmt("; map χ² p = %.3f (source), %.3f (image), %d dof", inv.p_value_source, inv.p_value_image,
                  inv.degrees_of_freedom);
    return {ok, detail};
}

// Smallest t > 0 on which the ray meets the ellipsoid, by the quadratic formula.
std::optional<double> quadric_hit(const Ellipsoid& e, const Vector& q, const Vector& v) {
    Vector p = e.rotation.transpose_times(q - e.center);
    Vector d = e.rotation.transpose_times(v);
    for (std::size_t i = 0; i < static_cast<std::size_t>(e.dimension); ++i) {
        p[i] /= e.semi_axes[i];
        d[i] /= e.semi_axes[i];
    }
    const double a = dot(d, d), b = dot(p, d), c = dot(p, p) - 1.0;
    const double disc = b * b - a * c;
    if (disc < 0.0) return std::nullopt;
    const double t = (-b - std::sqrt(disc)) / a;
    if (t <= 1e-9) return std::nullopt;
    return t;
}

std::optional<double> ball_hit(const Ball& b, const Vector& q, const Vector& v) {
    const Vector d = q - b.center;
    const double bb = dot(d, v), c = norm2(d) - b.radius * b.radius;
    const double disc = bb * bb - c;
    if (disc < 0.0) return std::nullopt;
    const double t = -bb - std::sqrt(disc);
    if (t <= 1e-9) return std::nullopt;
    return t;
}

// First event along the ray from closed forms only: nearest quadric, else the sphere.
double oracle_time(const Scene& s, const Vector& q, const UnitVector& v, bool& hit) {
    double best = sphere_exit_time(s.bounding, q, v);
    hit = false;
    for (const auto& body : s.bodies) {
        std::optional<double> t;
        if (const auto* b = std::get_if<Ball>(&body.shape())) t = ball_hit(*b, q, v.vec());
        if (const auto* e = std::get_if<Ellipsoid>(&body.shape())) t = quadric_hit(*e, q, v.vec());
        if (t && *t < best) {
            best = *t;
            hit = true;
        }
    }
    return best;
}

Verdict c8_raycast_oracle() {
    Scene ellipses;
    ellipses.name = "ellipses";
    ellipses.dimension = 2;
    ellipses.bounding = {{0, 0}, 2.0};
    ellipses.bodies = {make_ellipsoid(2, {-0.6, 0.3}, {0.7, 0.3}, Vector{0.5, 0}),
                       make_ellipsoid(2, {0.8, -0.4}, {0.4, 0.6}, Vector{-0.3, 0})};
    Scene ellipsoid3;
    ellipsoid3.name = "ellipsoid_3d";
    ellipsoid3.dimension = 3;
    ellipsoid3.bounding = {{0, 0, 0}, 2.0};
    ellipsoid3.bodies = {make_ellipsoid(3, {0.1, 0.2, -0.1}, {0.8, 0.5, 0.3}, {0.4, -0.3, 0.9})};

    std::vector<Scene> scenes{bundled_scene("single_ball"), bundled_scene("single_ball_3d"),
                              bundled_scene("two_disks"), bundled_scene("five_balls"), ellipses, ellipsoid3};
    bool ok = true;
    std::string detail;
    for (const Scene& s : scenes) {
        const LiouvilleSampler sampler(s, kSeed);
        std::mt19937_64 rng(11);
        std::normal_distribution<double> g;
        double worst = 0.0;
        long mismatched = 0, hits = 0, degenerate = 0;
        for (std::uint64_t i = 0; i < 10000; ++i) {
            Vector q;
            UnitVector v;
            if (i % 2 == 0) {
                // a Liouville entry on the sphere
                const auto x = sampler.sample_entry(i);
                q = x.q;
                v = x.v;
            } else {
                // aimed into the bounds of a random obstacle
                const auto& bb = s.bodies[rng() % s.bodies.size()].bounds();
                const auto x = sampler.sample_entry(i);
                Vector target = bb.center;
                for (int k = 0; k < s.dimension; ++k) target[static_cast<std::size_t>(k)] += 0.8 * bb.radius * g(rng) / 2;
                q = x.q;
                v = UnitVector::normalize(target - q);
            }
            bool oracle_hit = false;
            const double expected = oracle_time(s, q, v, oracle_hit);
            const auto ev = first_hit(s, q, v);
            if (const auto* h = std::get_if<HitRecord>(&ev)) {
                if (!oracle_hit) ++mismatched;
                worst = std::max(worst, std::abs(h->time - expected));
                ++hits;
            } else if (const auto* e = std::get_if<SphereExit>(&ev)) {
                if (oracle_hit) ++mismatched;
                worst = std::max(worst, std::abs(e->time - expected));
            } else {
                ++degenerate;
            }
        }
        const bool pass = worst <= 1e-8 && mismatched == 0 && degenerate == 0;
        ok = ok && pass;
        detail += fmt("%s%s %.1e (%ld hits%s)", detail.empty() ? "" : "; ", s.name.c_str(), worst, hits,
                      mismatched || degenerate ? fmt(", %ld mismatched, %ld degenerate", mismatched, degenerate).c_str()
                                               : "");
    }
    return {ok, detail};
}

Verdict c9_perturbation_continuity() {
    const std::vector<double> eps{0.0, 0.2, 0.1, 0.05, 0.025};
    const auto rows = perturbation_sweep(bundled_scene("livshits_cavity"), eps, params());
    bool ok = true;
    std::string detail = "cavity |Δ|:";
    for (std::size_t i = 1; i < rows.size(); ++i) {
        detail += fmt(" ε=%.4g %.4f±%.4f", rows[i].epsilon, rows[i].deviation,
                      std::hypot(rows[i].trapped.at_cap.std_error, rows[0].trapped.at_cap.std_error));
        if (i >= 2) {
            const double s1 = rows[i - 1].trapped.at_cap.std_error, s2 = rows[i].trapped.at_cap.std_error;
            ok = ok && rows[i].deviation <= rows[i - 1].deviation + 2 * std::hypot(s1, s2);
        }
    }
    const auto ball = perturbation_sweep(bundled_scene("single_ball"), eps, params());
    double worst_z = 0.0;
    for (const auto& r : ball) {
        const double z = std::abs(r.trapped.at_cap.value) / r.trapped.at_cap.std_error;
        worst_z = std::max(worst_z, z);
    }
    ok = ok && worst_z <= 3;
    detail += fmt("; single_ball max |λ(Trap)|/σ = %.2f", worst_z);
    return {ok, detail};
}

Verdict c10_determinism() {
    struct Case {
        std::string command, scene;
    };
    const std::vector<Case> cases{{"santalo-check", "five_balls"}, {"volume", "single_ball"},
                                  {"trapped", "livshits_cavity"},  {"histogram", "two_disks"},
                                  {"count", "five_balls"},         {"sweep", "livshits_cavity"}};
    bool ok = true;
    std::string detail;
    for (const auto& c : cases) {
        for (auto format : {cli::Format::Csv, cli::Format::Json}) {
            std::string outputs[2];
            int codes[2];
            int idx = 0;
            for (int workers : {1, 16}) {
                cli::RunConfig cfg;
                cfg.command = c.command;
                cfg.scene = c.scene;
                cfg.seed = 5;
                cfg.samples = 20000;
                cfg.format = format;
                cfg.workers = workers;
                if (c.command == "sweep") cfg.epsilons = {0.0, 0.1};
                if (c.command == "count") cfg.radius = 0.3;
                std::ostringstream out, log;
                codes[idx] = cli::run(cfg, out, log);
                outputs[idx++] = out.str();
            }
            const bool same = outputs[0] == outputs[1] && codes[0] == codes[1] && !outputs[0].empty();
            ok = ok && same;
            if (!same) detail += fmt("%s %s differs; ", c.command.c_str(), format == cli::Format::Csv ? "csv" : "json");
        }
    }
    if (detail.empty()) detail = "6 subcommands × {csv, json} byte-identical at 1 and 16 workers";
    return {ok, detail};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"santalo identity, empty disk", c1_santalo_empty},
        {"volume recovery", c2_volume},
        {"no trapping for convex obstacles", c3_convex_not_trapped},
        {"positive trapping in the cavity", c4_cavity_trapped},
        {"reflection-count bounds", c5_reflection_bounds},
        {"ball counting", c6_ball_count},
        {"dynamics properties", c7_dynamics},
        {"raycast oracle", c8_raycast_oracle},
        {"perturbation continuity", c9_perturbation_continuity},
        {"determinism", c10_determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        failures += !v.pass;
        std::printf("criterion %2zu %s  %s — %s [%.1f s]\n", i + 1, v.pass ? "PASS" : "FAIL", criteria[i].first,
                    v.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
