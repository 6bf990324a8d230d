#include "billiards/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "billiards/errors.hpp"
#include "billiards/estimators.hpp"
#include "billiards/scene_io.hpp"

namespace billiards::cli {

namespace {

using Json = nlohmann::ordered_json;

// Summary fields are repeated as leading columns of every CSV row.
struct Report {
    Json meta = Json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<Json>> rows;
};

std::string csv_cell(const Json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

void write_report(const Report& r, Format format, std::ostream& out) {
    if (format == Format::Json) {
        Json doc = r.meta;
        Json rows = Json::array();
        for (const auto& row : r.rows) {
            Json obj = Json::object();
            for (std::size_t i = 0; i < r.columns.size(); ++i) obj[r.columns[i]] = row[i];
            rows.push_back(obj);
        }
        doc["rows"] = rows;
        out << doc.dump(2) << '\n';
        return;
    }
    std::string sep;
    for (const auto& [key, _] : r.meta.items()) {
        out << sep << key;
        sep = ",";
    }
    for (const auto& c : r.columns) {
        out << sep << c;
        sep = ",";
    }
    out << '\n';
    for (const auto& row : r.rows) {
        sep.clear();
        for (const auto& [_, value] : r.meta.items()) {
            out << sep << csv_cell(value);
            sep = ",";
        }
        for (const auto& cell : row) {
            out << sep << csv_cell(cell);
            sep = ",";
        }
        out << '\n';
    }
}

Json maybe(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Report base_report(const RunConfig& cfg, const Scene& scene, const Caps& caps) {
    Report r;
    r.meta["command"] = cfg.command;
    r.meta["scene"] = scene.name;
    r.meta["scene_hash"] = scene_hash(scene);
    r.meta["seed"] = cfg.seed;
    r.meta["samples"] = cfg.samples;
    r.meta["t_max"] = caps.t_max;
    r.meta["k_max"] = caps.k_max;
    return r;
}

void stamp_counts(Report& r, const Estimate& e) {
    r.meta["n_censored"] = e.n_censored;
    r.meta["n_degenerate"] = e.n_degenerate;
}

int reliability(const Estimate& e, std::ostream& log) {
    if (!e.unreliable()) return kOk;
    log << "warning: " << e.n_degenerate << " of " << e.n_samples
        << " trajectories degenerated; estimate is unreliable\n";
    return kUnreliable;
}

int dispatch(const RunConfig& cfg, const Scene& scene, std::ostream& out, std::ostream& log) {
    RunParams params;
    params.seed = cfg.seed;
    params.samples = cfg.samples;
    params.workers = cfg.workers;
    params.volume.workers = cfg.workers;
    Caps caps = Caps::defaults_for(scene);
    if (cfg.t_max) caps.t_max = *cfg.t_max;
    if (cfg.k_max) caps.k_max = *cfg.k_max;
    params.caps = caps;

    Report report = base_report(cfg, scene, caps);
    int code = kOk;

    if (cfg.command == "santalo-check") {
        const SantaloCheck c = santalo_check(scene, params);
        stamp_counts(report, c.integral);
        report.columns = {"integral", "integral_std_error", "lambda_total", "lambda_std_error", "z_score", "verdict"};
        report.rows.push_back({c.integral.value, c.integral.std_error, c.lambda_total.value,
                               c.lambda_total.std_error, c.z_score, c.pass ? "PASS" : "FAIL"});
        code = reliability(c.integral, log);
        if (code == kOk && !c.pass) code = kVerdictFail;
    } else if (cfg.command == "volume") {
        const Estimate v = recover_volume(scene, params);
        stamp_counts(report, v);
        report.columns = {"volume", "std_error"};
        report.rows.push_back({v.value, v.std_error});
        code = reliability(v, log);
    } else if (cfg.command == "trapped") {
        const TrappedMeasure t = trapped_measure(scene, params);
        stamp_counts(report, t.at_cap);
        report.columns = {"cap", "t_cap", "value", "std_error", "censored_at_cap"};
        report.rows.push_back({"at_cap", t.at_cap.caps.t_max, t.at_cap.value, t.at_cap.std_error,
                               t.at_cap.n_censored});
        report.rows.push_back({"at_half_cap", t.at_half_cap.caps.t_max, t.at_half_cap.value,
                               t.at_half_cap.std_error, t.at_half_cap.n_censored});
        code = reliability(t.at_cap, log);
    } else if (cfg.command == "histogram") {
        const SampleSet samples = collect_samples(scene, params);
        const ReflectionHistogram h = build_reflection_histogram(scene, samples, lambda_total(scene, params.volume));
        report.meta["n_censored"] = h.n_censored;
        report.meta["n_degenerate"] = h.n_degenerate;
        report.meta["mu_total"] = h.mu_total;
        report.meta["mu_censored"] = h.mu_censored();
        report.meta["weighted_sum"] = h.weighted_sum;
        report.meta["weighted_sum_std_error"] = h.weighted_sum_std_error;
        report.meta["lambda_total"] = h.lambda_total.value;
        report.meta["lower_bound"] = h.lower_bound;
        report.meta["upper_bound"] = maybe(h.upper_bound);
        report.meta["decay_constant"] = h.decay_constant;
        report.columns = {"k", "count", "mu_gamma"};
        for (std::size_t k = 0; k < h.counts.size(); ++k) {
            report.rows.push_back({k, h.counts[k], h.mu_gamma(k)});
        }
        Estimate e;
        e.n_samples = h.n_samples;
        e.n_degenerate = h.n_degenerate;
        code = reliability(e, log);
        try {
            check_reflection_bounds(h);
        } catch (const BoundViolation& ex) {
            write_report(report, cfg.format, out);
            log << "error: " << ex.what() << '\n';
            return kBoundViolation;
        }
    } else if (cfg.command == "count") {
        if (!cfg.radius) {
            log << "error: count needs --radius\n";
            return kUsage;
        }
        const Estimate v = recover_volume(scene, params);
        const ComponentCount c = count_components(v, *cfg.radius, scene.dimension);
        stamp_counts(report, v);
        report.columns = {"radius", "volume", "volume_std_error", "fractional", "std_error", "components"};
        report.rows.push_back({*cfg.radius, v.value, v.std_error, c.fractional, c.std_error, c.rounded});
        code = reliability(v, log);
    } else if (cfg.command == "sweep") {
        if (cfg.epsilons.empty()) {
            log << "error: sweep needs --epsilons\n";
            return kUsage;
        }
        const auto rows = perturbation_sweep(scene, cfg.epsilons, params);
        std::uint64_t censored = 0, degenerate = 0;
        report.columns = {"epsilon",     "value",           "std_error", "half_cap_value", "half_cap_std_error",
                          "deviation", "n_censored_row", "n_degenerate_row"};
        for (const auto& row : rows) {
            censored += row.trapped.at_cap.n_censored;
            degenerate += row.trapped.at_cap.n_degenerate;
            report.rows.push_back({row.epsilon, row.trapped.at_cap.value, row.trapped.at_cap.std_error,
                                   row.trapped.at_half_cap.value, row.trapped.at_half_cap.std_error, row.deviation,
                                   row.trapped.at_cap.n_censored, row.trapped.at_cap.n_degenerate});
            if (reliability(row.trapped.at_cap, log) != kOk) code = kUnreliable;
        }
        report.meta["n_censored"] = censored;
        report.meta["n_degenerate"] = degenerate;
    } else {
        log << "error: unknown command '" << cfg.command << "'\n";
        return kUsage;
    }
    write_report(report, cfg.format, out);
    return code;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& log) {
    const auto start = std::chrono::steady_clock::now();
    int code = kOk;
    try {
        const Scene scene = load_scene(config.scene);
        log << config.command << ": scene " << scene.name << ", N = " << config.samples << ", seed = " << config.seed
            << '\n';
        if (config.out) {
            std::ofstream file(*config.out);
            if (!file) {
                log << "error: cannot write " << *config.out << '\n';
                return kUsage;
            }
            code = dispatch(config, scene, file, log);
            file.flush();
            if (!file) {
                log << "error: failed writing " << *config.out << '\n';
                return kUsage;
            }
        } else {
            code = dispatch(config, scene, out, log);
        }
    } catch (const SceneParseError& e) {
        log << "error: " << e.what() << '\n';
        return kSceneParse;
    } catch (const SceneValidationError& e) {
        log << "error: " << e.what() << '\n';
        return kSceneValidation;
    } catch (const BoundViolation& e) {
        log << "error: " << e.what() << '\n';
        return kBoundViolation;
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << '\n';
        return kUsage;
    }
    const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
    log << config.command << ": done in " << took.count() << " s\n";
    return code;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Monte Carlo billiards in a ball with obstacles"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string format = "csv";

    struct Sub {
        const char* name;
        const char* help;
    };
    const Sub subs[] = {
        {"santalo-check", "compare the travelling-time integral with the phase-space volume"},
        {"volume", "recover the obstacle volume from travelling times"},
        {"trapped", "estimate the trapped-set measure at the cap and half the cap"},
        {"histogram", "reflection-count histogram and bounds"},
        {"count", "count equal-radius ball components"},
        {"sweep", "trapped measure along the scene's perturbation family"},
    };
    for (const auto& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("--scene", cfg.scene, "bundled scene name or scene file")->required();
        sub->add_option("--seed", cfg.seed, "RNG seed");
        sub->add_option("--samples", cfg.samples, "number of trajectories")->check(CLI::PositiveNumber);
        sub->add_option("--t-max", cfg.t_max, "time cap (default 1000·R)")->check(CLI::PositiveNumber);
        sub->add_option("--k-max", cfg.k_max, "reflection cap (default 10000)")->check(CLI::PositiveNumber);
        sub->add_option("--out", cfg.out, "output file (default stdout)");
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--workers", cfg.workers, "worker threads (0 = all)")->check(CLI::NonNegativeNumber);
        if (std::string(s.name) == "count") {
            sub->add_option("--radius", cfg.radius, "common component radius")->required()->check(
                CLI::PositiveNumber);
        }
        if (std::string(s.name) == "sweep") {
            sub->add_option("--epsilons", cfg.epsilons, "perturbation amplitudes (must include 0)")
                ->required()
                ->delimiter(',');
        }
        sub->callback([&cfg, name = std::string(s.name)] { cfg.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int status = app.exit(e, out, err);
        return status == 0 ? kOk : kUsage;
    }
    cfg.format = format == "json" ? Format::Json : Format::Csv;
    return run(cfg, out, err);
}

}  // namespace billiards::cli
