#include "lrvlab/cli.hpp"

#include "lrvlab/error.hpp"
#include "lrvlab/io.hpp"
#include "lrvlab/parallel.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>

namespace lrvlab::cli {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

/// Writes to the --out file when given, otherwise to the fallback stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw DomainError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }

private:
    std::ofstream file_;
    std::ostream& fallback_;
};

void emit_json(std::ostream& os, const json& j) { os << j.dump(2) << '\n'; }

std::string resolve_format(const std::string& requested, const char* fallback) {
    const std::string f = requested.empty() ? fallback : requested;
    if (f != "json" && f != "csv") throw ConfigError("--format must be json or csv");
    return f;
}

struct EstimatorFlags {
    std::string preset = "paper-default";
    std::optional<int> m;
    std::optional<std::string> kernel;
    std::optional<int> ell;
    std::optional<double> lambda;
    bool no_rcp = false;
};

void add_estimator_flags(CLI::App* cmd, EstimatorFlags& f) {
    cmd->add_option("--preset", f.preset, "Estimator preset")->capture_default_str();
    cmd->add_option("--m", f.m, "Order of the difference sequence");
    cmd->add_option("--kernel", f.kernel, "Kernel name, e.g. parzen_poly:q=2 or bartlett");
    cmd->add_option("--ell", f.ell, "Fixed bandwidth (skips bandwidth selection)");
    cmd->add_option("--lambda", f.lambda, "Lag-to-bandwidth ratio h/ell for a fixed bandwidth");
    cmd->add_flag("--no-rcp", f.no_rcp, "Skip rough centering");
}

struct EstimateOutcome {
    json payload;
    double lrv = 0.0;
    int ell = 0;
    int h = 0;
    int m = 0;
    std::string regime;
};

EstimateOutcome estimate(const TimeSeries& x, const EstimatorFlags& f) {
    if (f.lambda && !(*f.lambda > 0.0 && std::isfinite(*f.lambda))) throw ConfigError("--lambda must be positive");
    if (f.m && *f.m < 0) throw ConfigError("--m must be non-negative");
    EstimateOutcome o;
    const bool wz = f.preset == "wz-ss";
    if (wz || f.ell) {
        EstimatorConfig c;
        double lambda = 2.0;
        if (wz) {
            c = wz_ss_config(x.size());
            lambda = 1.0;
        } else {
            const auto p = preset_config(f.preset);
            c.seq = p.m == 0 ? DifferenceSequence::zeroth() : optimal_sequence(p.m);
            c.kernel = p.kernel;
        }
        if (f.m) c.seq = *f.m == 0 ? DifferenceSequence::zeroth() : optimal_sequence(*f.m);
        if (f.kernel) c.kernel = Kernel::parse(*f.kernel);
        if (f.ell) c.ell = *f.ell;
        if (f.lambda) lambda = *f.lambda;
        if (c.ell < 1) throw ConfigError("--ell must be at least 1");
        c.h = std::max(1, static_cast<int>(std::lround(lambda * c.ell)));
        LrvResult r;
        if (wz) r = lrv_subsampling(x, c, Overlap::none);
        else r = x.dims() > 1 ? lrv_multivariate(x, c) : lrv(x, c);
        o.payload = {{"lrv", r.value}, {"ell", r.config.ell}, {"h", r.config.h}, {"m", r.config.m()},
                     {"kernel", r.config.kernel.name()}, {"regime", to_string(r.regime)}, {"estimate", r}};
        o.lrv = r.value;
        o.ell = r.config.ell;
        o.h = r.config.h;
        o.m = r.config.m();
        o.regime = to_string(r.regime);
    } else {
        if (x.dims() > 1) throw ConfigError("multivariate input needs a fixed bandwidth (--ell)");
        auto cfg = preset_config(f.preset);
        if (f.m) cfg.m = *f.m;
        if (f.kernel) cfg.kernel = Kernel::parse(*f.kernel);
        if (f.lambda && *f.lambda != 2.0) throw ConfigError("bandwidth selection fixes lambda = 2; pass --ell to choose lambda");
        if (f.no_rcp) cfg.apply_rcp = false;
        const auto r = suggested_estimator(x, cfg);
        o.payload = r;
        o.lrv = r.lrv.value;
        o.ell = r.ell;
        o.h = r.lrv.config.h;
        o.m = r.lrv.config.m();
        o.regime = to_string(r.lrv.regime);
    }
    o.payload["preset"] = f.preset;
    o.payload["n"] = x.size();
    o.payload["dims"] = x.dims();
    return o;
}

// ---- simulate ----------------------------------------------------------------

template <class T>
T value_or(const json& j, const char* key, T fallback) {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

NoiseModel noise_from(const json& j) {
    if (j.is_string()) return noise_from(json{{"kind", j}});
    static const std::set<std::string> allowed{"kind", "coeffs", "sigma", "theta1", "theta2", "normalize"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw ConfigError("unknown noise key '" + it.key() + "'");
    const auto kind = value_or<std::string>(j, "kind", "iid");
    const double sigma = value_or(j, "sigma", 1.0);
    NoiseModel m;
    if (kind == "iid") m = NoiseModel::iid(sigma);
    else if (kind == "ar") m = NoiseModel::ar(j.at("coeffs").get<std::vector<double>>(), sigma);
    else if (kind == "ma") m = NoiseModel::ma(j.at("coeffs").get<std::vector<double>>(), sigma);
    else if (kind == "tar") m = NoiseModel::tar(j.at("theta1").get<double>(), value_or(j, "theta2", 0.5));
    else throw ConfigError("unknown noise kind '" + kind + "'");
    if (value_or(j, "normalize", kind == "tar")) m = m.normalized();
    return m;
}

MeanFunction mean_from(const json& j) {
    if (j.is_string()) return MeanFunction::parse(j.get<std::string>());
    return MeanFunction::parse(value_or<std::string>(j, "family", "zero"), value_or(j, "xi", 1.0));
}

TestKind test_kind(const std::string& s) {
    if (s == "ks") return TestKind::ks;
    if (s == "wz") return TestKind::wz;
    throw ConfigError("unknown test '" + s + "' (expected ks or wz)");
}

struct SimulateFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> reps;
    std::optional<unsigned> workers;
    std::string out;
    std::string format;
};

int simulate(const SimulateFlags& f, std::ostream& out) {
    json cfg = load_config(f.config);
    if (!cfg.is_object()) throw ConfigError(f.config + ": top level must be a table");
    static const std::set<std::string> allowed{"experiment", "n",       "reps",   "seed",  "workers",
                                               "estimators", "estimator", "noise", "mean",  "test",
                                               "xi_grid",    "level",    "beta",   "calibration_reps",
                                               "b_grid",     "scb_reps"};
    for (auto it = cfg.begin(); it != cfg.end(); ++it)
        if (!allowed.count(it.key())) throw ConfigError(f.config + ": unknown key '" + it.key() + "'");
    if (f.seed) cfg["seed"] = *f.seed;
    if (f.reps) cfg["reps"] = *f.reps;
    const auto format = resolve_format(f.format, "csv");
    try {
        const auto kind = cfg.at("experiment").get<std::string>();
        const auto n = cfg.at("n").get<std::size_t>();
        const int reps = cfg.at("reps").get<int>();
        const auto seed = value_or<std::uint64_t>(cfg, "seed", 1);
        const unsigned workers = f.workers ? *f.workers : value_or<unsigned>(cfg, "workers", 0);
        const auto noise = noise_from(cfg.contains("noise") ? cfg.at("noise") : json("iid"));
        cfg["seed"] = seed;
        Sink sink(f.out, out);
        if (kind == "mse") {
            const auto estimators = cfg.at("estimators").get<std::vector<std::string>>();
            const auto mean = mean_from(cfg.contains("mean") ? cfg.at("mean") : json("zero"));
            const auto t = mse_experiment(estimators, noise, mean, n, reps, seed, workers);
            if (format == "csv") write_csv(sink.stream(), t);
            else emit_json(sink.stream(), document("mse_table", {{"config", cfg}, {"table", t}}));
        } else if (kind == "power") {
            const auto estimators = cfg.at("estimators").get<std::vector<std::string>>();
            const auto family = mean_from(cfg.at("mean"));
            const auto grid = cfg.at("xi_grid").get<std::vector<double>>();
            const double level = value_or(cfg, "level", 0.05);
            WzOptions wz;
            wz.level = level;
            wz.beta = value_or(cfg, "beta", wz.beta);
            wz.calibration_reps = value_or(cfg, "calibration_reps", wz.calibration_reps);
            const auto t = power_experiment(test_kind(value_or<std::string>(cfg, "test", "ks")), estimators, family,
                                            grid, n, reps, seed, noise, level, wz, workers);
            if (format == "csv") write_csv(sink.stream(), t);
            else emit_json(sink.stream(), document("power_table", {{"config", cfg}, {"table", t}}));
        } else if (kind == "coverage") {
            const auto grid = cfg.at("b_grid").get<std::vector<double>>();
            const auto rows = coverage_experiment(n, grid, noise, reps, seed,
                                                  value_or<std::string>(cfg, "estimator", "paper-default"),
                                                  value_or(cfg, "scb_reps", 1000), workers);
            if (format == "csv") write_csv(sink.stream(), rows);
            else emit_json(sink.stream(), document("coverage_table", {{"config", cfg}, {"rows", rows}}));
        } else {
            throw ConfigError("unknown experiment '" + kind + "' (expected mse, power or coverage)");
        }
    } catch (const json::exception& e) {
        throw ConfigError(f.config + ": " + e.what());
    }
    return kSuccess;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Difference-based long-run variance estimation, rough centering and change-point tests", "lrvlab"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // estimate
    EstimatorFlags est;
    std::string est_input, est_out, est_format;
    auto* c_est = app.add_subcommand("estimate", "Estimate the long-run variance of a series");
    add_estimator_flags(c_est, est);
    c_est->add_option("--out", est_out, "Output file (default stdout)");
    c_est->add_option("--format", est_format, "json or csv");
    c_est->add_option("input", est_input, "CSV file, - for stdin")->required();

    // center
    std::string ctr_preset = "paper-default", ctr_input, ctr_out, ctr_report;
    auto* c_ctr = app.add_subcommand("center", "Rough-center a series (jump and slope removal)");
    c_ctr->add_option("--preset", ctr_preset, "Preset supplying the rough-centering options")->capture_default_str();
    c_ctr->add_option("--out", ctr_out, "Centered CSV (default stdout)");
    c_ctr->add_option("--report", ctr_report, "Report JSON (default stderr)");
    c_ctr->add_option("input", ctr_input, "CSV file, - for stdin")->required();

    // test
    std::string t_kind, t_input, t_lrv = "auto", t_preset = "paper-default", t_out, t_format;
    std::optional<double> t_level;
    WzOptions t_wz;
    auto* c_test = app.add_subcommand("test", "CUSUM (ks) or local-window (wz) change-point test");
    c_test->add_option("kind", t_kind, "ks or wz")->required()->check(CLI::IsMember({"ks", "wz"}));
    c_test->add_option("input", t_input, "CSV file, - for stdin")->required();
    c_test->add_option("--lrv", t_lrv, "auto (estimate with --preset) or a positive value")->capture_default_str();
    c_test->add_option("--preset", t_preset, "Estimator preset for --lrv auto")->capture_default_str();
    c_test->add_option("--level", t_level, "Significance level (default 0.05)");
    c_test->add_option("--beta", t_wz.beta, "Window exponent of the wz test")->capture_default_str();
    c_test->add_option("--reps", t_wz.calibration_reps, "Calibration replications of the wz test")->capture_default_str();
    c_test->add_option("--seed", t_wz.seed, "Calibration seed of the wz test")->capture_default_str();
    c_test->add_option("--out", t_out, "Output file (default stdout)");
    c_test->add_option("--format", t_format, "json or csv");

    // trend
    std::string tr_input, tr_out, tr_format;
    std::optional<double> tr_b;
    auto* c_tr = app.add_subcommand("trend", "Jackknifed Gaussian kernel trend on the design points");
    c_tr->add_option("--b", tr_b, "Bandwidth in (0, 1/2) (default 0.017 (200/n)^{1/5})");
    c_tr->add_option("--out", tr_out, "Output file (default stdout)");
    c_tr->add_option("--format", tr_format, "json or csv");
    c_tr->add_option("input", tr_input, "CSV file, - for stdin")->required();

    // scb
    std::string s_input, s_out, s_format;
    std::optional<double> s_level;
    ScbOptions s_opts;
    auto* c_scb = app.add_subcommand("scb", "Simultaneous confidence band for the trend");
    c_scb->add_option("--level", s_level, "Confidence level (default 0.95)");
    c_scb->add_option("--b-star", s_opts.b_star, "Pilot bandwidth b*");
    c_scb->add_option("--reps", s_opts.reps, "Monte Carlo replications for the band quantile")->capture_default_str();
    c_scb->add_option("--seed", s_opts.seed, "Monte Carlo seed")->capture_default_str();
    c_scb->add_option("--preset", s_opts.estimator, "Estimator preset for v")->capture_default_str();
    c_scb->add_option("--grid", s_opts.grid_points, "Number of grid points")->capture_default_str();
    c_scb->add_option("--out", s_out, "Output file (default stdout)");
    c_scb->add_option("--format", s_format, "json or csv");
    c_scb->add_option("input", s_input, "CSV file, - for stdin")->required();

    // simulate
    SimulateFlags sim;
    auto* c_sim = app.add_subcommand("simulate", "Run an MSE, power or coverage experiment from a JSON/TOML config");
    c_sim->add_option("--config", sim.config, "Experiment config (.json or .toml)")->required();
    c_sim->add_option("--seed", sim.seed, "Master seed (overrides the config)");
    c_sim->add_option("--reps", sim.reps, "Replications (overrides the config)");
    c_sim->add_option("--workers", sim.workers, "Worker threads (0 = all cores); results do not depend on it");
    c_sim->add_option("--out", sim.out, "Output file (default stdout)");
    c_sim->add_option("--format", sim.format, "csv (default) or json");

    // bench
    std::size_t b_n = 2000;
    int b_reps = 20;
    std::uint64_t b_seed = 1;
    std::string b_preset = "paper-default", b_out;
    auto* c_bench = app.add_subcommand("bench", "Time the estimator on simulated white noise");
    c_bench->add_option("--n", b_n, "Series length")->capture_default_str();
    c_bench->add_option("--reps", b_reps, "Timed estimates")->capture_default_str();
    c_bench->add_option("--seed", b_seed, "Seed of the simulated series")->capture_default_str();
    c_bench->add_option("--preset", b_preset, "Estimator preset")->capture_default_str();
    c_bench->add_option("--out", b_out, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kSuccess : kUsage;
    }

    try {
        if (*c_est) {
            const auto data = read_csv_file(est_input);
            const auto o = estimate(data.series, est);
            const auto format = resolve_format(est_format, "json");
            Sink sink(est_out, out);
            if (format == "json") {
                emit_json(sink.stream(), document("lrv_estimate", o.payload));
            } else {
                sink.stream() << "lrv,ell,h,m,regime\n"
                              << format_double(o.lrv) << ',' << o.ell << ',' << o.h << ',' << o.m << ',' << o.regime
                              << '\n';
            }
        } else if (*c_ctr) {
            const auto data = read_csv_file(ctr_input);
            const RcpOptions opts = ctr_preset == "wz-ss" ? RcpOptions{} : preset_config(ctr_preset).rcp;
            const auto centered = rough_center(data.series, opts);
            Sink sink(ctr_out, out);
            write_csv(sink.stream(), centered.series, data.header);
            Sink report(ctr_report, err);
            emit_json(report.stream(), document("rcp_report", json(centered.report)));
        } else if (*c_test) {
            const auto data = read_csv_file(t_input);
            double v = 0.0;
            json extra = {{"test", t_kind}, {"n", data.series.size()}};
            if (t_lrv == "auto") {
                v = estimate_by_preset(t_preset, data.series);
                extra["preset"] = t_preset;
            } else {
                std::size_t used = 0;
                try {
                    v = std::stod(t_lrv, &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used != t_lrv.size() || !(v > 0.0) || !std::isfinite(v))
                    throw ConfigError("--lrv must be 'auto' or a positive number, got '" + t_lrv + "'");
            }
            TestResult r;
            if (t_kind == "ks") {
                r = ks_test(data.series, v, t_level.value_or(0.05));
            } else {
                t_wz.level = t_level.value_or(0.05);
                r = wz_test(data.series, v, t_wz);
                extra["beta"] = t_wz.beta;
                extra["window"] = wz_window(data.series.size(), t_wz.beta);
            }
            const auto format = resolve_format(t_format, "json");
            Sink sink(t_out, out);
            if (format == "json") {
                json j = r;
                j.update(extra);
                emit_json(sink.stream(), document("test_result", j));
            } else {
                sink.stream() << "test,statistic,critical_value,level,reject,lrv_used,location\n"
                              << t_kind << ',' << format_double(r.statistic) << ','
                              << format_double(r.critical_value) << ',' << format_double(r.level) << ','
                              << (r.reject ? "true" : "false") << ',' << format_double(r.lrv_used) << ','
                              << r.location << '\n';
            }
        } else if (*c_tr) {
            const auto data = read_csv_file(tr_input);
            const double b = tr_b.value_or(default_b_star(data.series.size()));
            const auto mu = local_linear_trend(data.series, b);
            const auto format = resolve_format(tr_format, "json");
            Sink sink(tr_out, out);
            std::vector<double> grid(mu.size());
            for (std::size_t i = 0; i < grid.size(); ++i)
                grid[i] = static_cast<double>(i + 1) / static_cast<double>(grid.size());
            if (format == "json") {
                emit_json(sink.stream(), document("trend", {{"b", b}, {"grid", grid}, {"mu_hat", mu}}));
            } else {
                sink.stream() << "t,mu_hat\n";
                for (std::size_t i = 0; i < mu.size(); ++i)
                    sink.stream() << format_double(grid[i]) << ',' << format_double(mu[i]) << '\n';
            }
        } else if (*c_scb) {
            const auto data = read_csv_file(s_input);
            s_opts.level = s_level.value_or(0.95);
            const auto band = scb(data.series, s_opts);
            const auto format = resolve_format(s_format, "json");
            Sink sink(s_out, out);
            if (format == "json") {
                json j = band;
                j["preset"] = s_opts.estimator;
                emit_json(sink.stream(), document("trend_band", j));
            } else {
                write_csv(sink.stream(), band);
            }
        } else if (*c_sim) {
            return simulate(sim, out);
        } else if (*c_bench) {
            if (b_reps < 1) throw ConfigError("--reps must be at least 1");
            const auto x = generate(NoiseModel::iid(), MeanFunction{}, b_n, b_seed);
            double sink_value = 0.0;
            const auto t0 = std::chrono::steady_clock::now();
            for (int r = 0; r < b_reps; ++r) sink_value += estimate_by_preset(b_preset, x);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            Sink sink(b_out, out);
            emit_json(sink.stream(), document("bench", {{"n", b_n},
                                                        {"reps", b_reps},
                                                        {"preset", b_preset},
                                                        {"seconds_total", secs},
                                                        {"seconds_per_estimate", secs / b_reps},
                                                        {"mean_estimate", sink_value / b_reps}}));
        }
    } catch (const ConfigError& e) {
        err << "lrvlab: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        err << "lrvlab: " << e.what() << '\n';
        return kDataError;
    } catch (const std::exception& e) {
        err << "lrvlab: " << e.what() << '\n';
        return kDataError;
    }
    return kSuccess;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"lrvlab"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace lrvlab::cli
