#include "lrvlab/simlab.hpp"

#include "lrvlab/error.hpp"
#include "lrvlab/parallel.hpp"
#include "lrvlab/polynomial.hpp"
#include "lrvlab/rcp.hpp"
#include "lrvlab/selection.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>

namespace lrvlab {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt(v[i]);
    return out;
}

} // namespace

NoiseModel NoiseModel::iid(double sigma) {
    NoiseModel m;
    m.sigma = sigma;
    check_stationary(m);
    return m;
}

NoiseModel NoiseModel::ar(std::vector<double> phi, double sigma) {
    NoiseModel m;
    m.kind = NoiseKind::ar;
    m.coeffs = std::move(phi);
    m.sigma = sigma;
    check_stationary(m);
    return m;
}

NoiseModel NoiseModel::ma(std::vector<double> theta, double sigma) {
    NoiseModel m;
    m.kind = NoiseKind::ma;
    m.coeffs = std::move(theta);
    m.sigma = sigma;
    check_stationary(m);
    return m;
}

NoiseModel NoiseModel::tar(double theta1, double theta2) {
    NoiseModel m;
    m.kind = NoiseKind::tar;
    m.theta1 = theta1;
    m.theta2 = theta2;
    check_stationary(m);
    return m;
}

NoiseModel NoiseModel::normalized() const {
    NoiseModel m = *this;
    m.normalize_to_unit_lrv = true;
    return m;
}

std::string NoiseModel::name() const {
    std::string base;
    switch (kind) {
    case NoiseKind::iid_normal: base = "iid:sigma=" + fmt(sigma); break;
    case NoiseKind::ar: base = "ar:phi=" + join(coeffs) + ";sigma=" + fmt(sigma); break;
    case NoiseKind::ma: base = "ma:theta=" + join(coeffs) + ";sigma=" + fmt(sigma); break;
    case NoiseKind::tar: base = "tar:theta1=" + fmt(theta1) + ";theta2=" + fmt(theta2); break;
    }
    return normalize_to_unit_lrv ? base + ";normalized" : base;
}

void check_stationary(const NoiseModel& noise) {
    if (!(noise.sigma > 0.0) || !std::isfinite(noise.sigma)) throw DomainError("noise scale sigma must be positive");
    for (double c : noise.coeffs)
        if (!std::isfinite(c)) throw DomainError("noise coefficients must be finite");
    if (noise.kind == NoiseKind::tar) {
        if (!(std::abs(noise.theta1) < 1.0 && std::abs(noise.theta2) < 1.0))
            throw DomainError("TAR coefficients must satisfy |theta| < 1 in both regimes");
    }
    if (noise.kind == NoiseKind::ar && !noise.coeffs.empty()) {
        // roots of 1 - phi_1 z - ... - phi_p z^p must lie outside the unit circle
        std::vector<double> poly{1.0};
        for (double phi : noise.coeffs) poly.push_back(-phi);
        while (poly.size() > 1 && poly.back() == 0.0) poly.pop_back();
        if (poly.size() > 1) {
            for (const auto& r : poly::roots(poly).roots)
                if (std::abs(r) <= 1.0 + 1e-10) throw DomainError("AR coefficients are not stationary");
        }
    }
}

std::vector<double> simulate_noise(const NoiseModel& noise, std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> z;
    std::vector<double> out(n);
    const std::size_t total = n + kBurnIn;
    switch (noise.kind) {
    case NoiseKind::iid_normal:
        for (auto& v : out) v = noise.sigma * z(rng);
        break;
    case NoiseKind::ar: {
        const std::size_t p = noise.coeffs.size();
        std::vector<double> hist(p, 0.0);  // hist[j] = Z_{i-1-j}
        for (std::size_t i = 0; i < total; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < p; ++j) acc += noise.coeffs[j] * hist[j];
            const double v = acc + noise.sigma * z(rng);
            if (p > 0) {
                std::rotate(hist.rbegin(), hist.rbegin() + 1, hist.rend());
                hist[0] = v;
            }
            if (i >= static_cast<std::size_t>(kBurnIn)) out[i - kBurnIn] = v;
        }
        break;
    }
    case NoiseKind::tar: {
        double prev = 0.0;
        for (std::size_t i = 0; i < total; ++i) {
            const double theta = prev >= 0.0 ? noise.theta1 : noise.theta2;
            // same arithmetic as the AR(1) branch, so equal regimes reproduce it bit for bit
            const double v = (0.0 + theta * prev) + 1.0 * z(rng);
            prev = v;
            if (i >= static_cast<std::size_t>(kBurnIn)) out[i - kBurnIn] = v;
        }
        break;
    }
    case NoiseKind::ma: {
        const std::size_t q = noise.coeffs.size();
        std::vector<double> eps(q + 1, 0.0);  // eps[j] = e_{i-j}
        for (std::size_t i = 0; i < total; ++i) {
            std::rotate(eps.rbegin(), eps.rbegin() + 1, eps.rend());
            eps[0] = z(rng);
            double v = eps[0];
            for (std::size_t j = 0; j < q; ++j) v += noise.coeffs[j] * eps[j + 1];
            if (i >= static_cast<std::size_t>(kBurnIn)) out[i - kBurnIn] = noise.sigma * v;
        }
        break;
    }
    }
    if (noise.normalize_to_unit_lrv) {
        const double scale = 1.0 / std::sqrt(lrv_oracle(noise));
        for (auto& v : out) v *= scale;
    }
    return out;
}

namespace {

constexpr std::size_t kTarLength = 1000000;
constexpr int kTarRuns = 16;
constexpr int kTarBurnIn = 10000;
constexpr std::uint64_t kTarSeed = 0x7A5C0FFEEULL;

double simulate_tar_lrv(double theta1, double theta2) {
    const auto runs = run_replications(kTarRuns, kTarSeed, 0, [&](std::size_t, std::mt19937_64& rng) {
        std::normal_distribution<double> z;
        std::vector<double> path(kTarLength);
        double prev = 0.0;
        for (int i = 0; i < kTarBurnIn + static_cast<int>(kTarLength); ++i) {
            const double v = (prev >= 0.0 ? theta1 : theta2) * prev + z(rng);
            prev = v;
            if (i >= kTarBurnIn) path[static_cast<std::size_t>(i - kTarBurnIn)] = v;
        }
        EstimatorConfig c;
        c.kernel = Kernel::parzen_poly(2);
        c.ell = 100;
        return lrv(TimeSeries(std::move(path)), c).value;
    });
    return std::accumulate(runs.begin(), runs.end(), 0.0) / static_cast<double>(runs.size());
}

std::filesystem::path cache_dir() {
    if (const char* env = std::getenv("LRVLAB_CACHE"); env && *env) return env;
    return std::filesystem::temp_directory_path() / "lrvlab";
}

double tar_lrv(double theta1, double theta2) {
    static std::mutex mutex;
    static std::map<std::pair<double, double>, double> memo;
    std::lock_guard lock(mutex);
    const auto key = std::make_pair(theta1, theta2);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const auto file = cache_dir() / ("tar_lrv_v1_" + fmt(theta1) + "_" + fmt(theta2) + ".txt");
    double value = 0.0;
    {
        std::ifstream in(file);
        if (in && (in >> value) && value > 0.0 && std::isfinite(value)) {
            memo.emplace(key, value);
            return value;
        }
    }
    value = simulate_tar_lrv(theta1, theta2);
    std::error_code ec;
    std::filesystem::create_directories(file.parent_path(), ec);
    if (!ec) {
        const auto tmp = file.string() + ".tmp" + std::to_string(std::hash<std::string>{}(file.string()));
        std::ofstream out(tmp);
        out << fmt(value) << "\n";
        out.close();
        if (out) std::filesystem::rename(tmp, file, ec);
    }
    memo.emplace(key, value);
    return value;
}

} // namespace

double lrv_oracle(const NoiseModel& noise) {
    check_stationary(noise);
    const double s2 = noise.sigma * noise.sigma;
    switch (noise.kind) {
    case NoiseKind::iid_normal: return s2;
    case NoiseKind::ar: {
        const double sum = std::accumulate(noise.coeffs.begin(), noise.coeffs.end(), 0.0);
        return s2 / ((1.0 - sum) * (1.0 - sum));
    }
    case NoiseKind::ma: {
        const double sum = std::accumulate(noise.coeffs.begin(), noise.coeffs.end(), 1.0);
        return s2 * sum * sum;
    }
    case NoiseKind::tar:
        if (noise.theta1 == noise.theta2) return 1.0 / ((1.0 - noise.theta1) * (1.0 - noise.theta1));
        return tar_lrv(noise.theta1, noise.theta2);
    }
    return 0.0;
}

double target_lrv(const NoiseModel& noise) { return noise.normalize_to_unit_lrv ? 1.0 : lrv_oracle(noise); }

MeanFunction MeanFunction::parse(std::string_view spec, double xi) {
    MeanFunction f;
    f.xi = xi;
    const auto colon = spec.find(':');
    const auto head = spec.substr(0, colon);
    static const std::map<std::string, MeanKind, std::less<>> kinds{
        {"zero", MeanKind::zero},       {"h1a", MeanKind::h1a},
        {"h1b", MeanKind::h1b},         {"h1c", MeanKind::h1c},
        {"exp_three_jumps", MeanKind::exp_three_jumps},
        {"linear", MeanKind::linear},   {"steps", MeanKind::steps},
        {"linear_plus_steps", MeanKind::linear_plus_steps},
        {"cosine", MeanKind::cosine},   {"spike_drop", MeanKind::spike_drop}};
    const auto it = kinds.find(head);
    if (it == kinds.end()) throw ConfigError("unknown mean function '" + std::string(head) + "'");
    f.kind = it->second;
    if (colon == std::string_view::npos) return f;
    std::string rest(spec.substr(colon + 1));
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("mean parameter '" + item + "' is not key=value");
        const std::string key = item.substr(0, eq), val = item.substr(eq + 1);
        try {
            if (key == "C") f.slope = std::stod(val);
            else if (key == "S") f.steps = std::stoi(val);
            else throw ConfigError("unknown mean parameter '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw ConfigError("mean parameter '" + item + "' is not numeric");
        }
    }
    if (f.steps < 1) throw ConfigError("number of steps S must be positive");
    return f;
}

std::string MeanFunction::name() const {
    switch (kind) {
    case MeanKind::zero: return "zero";
    case MeanKind::h1a: return "h1a";
    case MeanKind::h1b: return "h1b";
    case MeanKind::h1c: return "h1c";
    case MeanKind::exp_three_jumps: return "exp_three_jumps";
    case MeanKind::linear: return "linear:C=" + fmt(slope);
    case MeanKind::steps: return "steps:S=" + std::to_string(steps);
    case MeanKind::linear_plus_steps: return "linear_plus_steps:C=" + fmt(slope) + ",S=" + std::to_string(steps);
    case MeanKind::cosine: return "cosine";
    case MeanKind::spike_drop: return "spike_drop";
    }
    return "unknown";
}

double MeanFunction::continuous_part(long i, long n) const {
    const double t = static_cast<double>(i) / static_cast<double>(n);
    constexpr double two_pi = 2.0 * std::numbers::pi;
    switch (kind) {
    case MeanKind::h1b: return xi * std::sin(two_pi * t) / 2.0;
    case MeanKind::exp_three_jumps: return xi * std::exp(t);
    case MeanKind::linear:
    case MeanKind::linear_plus_steps: return xi * slope * t;
    case MeanKind::cosine: return xi * std::cos(two_pi * t);
    default: return 0.0;
    }
}

double MeanFunction::step_part(long i, long n) const {
    auto above = [&](long num, long den) { return den * i > num * n ? 1.0 : 0.0; };  // 1(i/n > num/den)
    switch (kind) {
    case MeanKind::h1a:
    case MeanKind::h1b: return xi * above(2, 10);
    case MeanKind::h1c: return (10 * i > 2 * n && 10 * i < 8 * n) ? xi : 0.0;
    case MeanKind::exp_three_jumps: return xi * (above(3, 10) + 2.0 * above(6, 10) + 4.0 * above(8, 10));
    case MeanKind::steps:
    case MeanKind::linear_plus_steps: {
        double acc = 0.0;
        for (long j = 1; j <= steps; ++j) acc += above(j, steps + 1);
        return xi * acc;
    }
    case MeanKind::spike_drop: return xi * (10.0 * above(30, 100) - 9.0 * above(35, 100));
    default: return 0.0;
    }
}

double MeanFunction::value(long i, long n) const { return continuous_part(i, n) + step_part(i, n); }

MeanDiagnostics diagnostics(const MeanFunction& mean, long n) {
    if (n < 2) throw DomainError("mean diagnostics need n >= 2");
    MeanDiagnostics d;
    std::vector<long> times{1};
    double total = 0.0;
    std::vector<double> mu(static_cast<std::size_t>(n));
    for (long i = 1; i <= n; ++i) {
        mu[static_cast<std::size_t>(i - 1)] = mean.value(i, n);
        total += mu[static_cast<std::size_t>(i - 1)];
        if (i == 1) continue;
        d.C = std::max(d.C, std::abs(mean.continuous_part(i, n) - mean.continuous_part(i - 1, n)) * static_cast<double>(n));
        const double jump = mean.step_part(i, n) - mean.step_part(i - 1, n);
        if (jump != 0.0) {
            ++d.J;
            d.S = std::max(d.S, std::abs(jump));
            times.push_back(i);
        }
    }
    times.push_back(n + 1);
    d.G = n;
    for (std::size_t j = 0; j + 1 < times.size(); ++j) d.G = std::min(d.G, times[j + 1] - times[j]);
    const double avg = total / static_cast<double>(n);
    for (double v : mu) d.V += (v - avg) * (v - avg);
    d.V /= static_cast<double>(n);
    return d;
}

TimeSeries generate(const NoiseModel& noise, const MeanFunction& mean, std::size_t n, std::mt19937_64& rng) {
    if (n < 8) throw InsufficientDataError("generate: n must be at least 8");
    auto x = simulate_noise(noise, n, rng);
    const long nn = static_cast<long>(n);
    for (long i = 1; i <= nn; ++i) x[static_cast<std::size_t>(i - 1)] += mean.value(i, nn);
    return TimeSeries(std::move(x));
}

TimeSeries generate(const NoiseModel& noise, const MeanFunction& mean, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return generate(noise, mean, n, rng);
}

double MseTable::paired_se(std::size_t a, std::size_t b) const {
    const auto& x = squared_errors.at(a);
    const auto& y = squared_errors.at(b);
    const std::size_t r = x.size();
    if (r < 2) return 0.0;
    double mean = 0.0;
    for (std::size_t i = 0; i < r; ++i) mean += x[i] - y[i];
    mean /= static_cast<double>(r);
    double ss = 0.0;
    for (std::size_t i = 0; i < r; ++i) ss += (x[i] - y[i] - mean) * (x[i] - y[i] - mean);
    return std::sqrt(ss / static_cast<double>(r - 1) / static_cast<double>(r));
}

namespace {

void check_reps(int reps) {
    if (reps < 1) throw ConfigError("number of replications must be positive");
}

double se_of_mean(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

} // namespace

MseTable mse_experiment(const std::vector<std::string>& estimators, const NoiseModel& noise, const MeanFunction& mean,
                        std::size_t n, int reps, std::uint64_t seed, unsigned workers) {
    check_reps(reps);
    if (estimators.empty()) throw ConfigError("mse_experiment: no estimators given");
    MseTable table;
    table.target = target_lrv(noise);
    const auto draws = run_replications(static_cast<std::size_t>(reps), seed, workers,
                                        [&](std::size_t, std::mt19937_64& rng) {
                                            const auto x = generate(noise, mean, n, rng);
                                            std::vector<double> est;
                                            for (const auto& e : estimators) est.push_back(estimate_by_preset(e, x));
                                            return est;
                                        });
    table.squared_errors.assign(estimators.size(), std::vector<double>(draws.size()));
    for (std::size_t e = 0; e < estimators.size(); ++e) {
        MseRow row;
        row.estimator = estimators[e];
        double sum = 0.0;
        for (std::size_t r = 0; r < draws.size(); ++r) {
            const double err = draws[r][e] - table.target;
            table.squared_errors[e][r] = err * err;
            sum += draws[r][e];
        }
        row.mean = sum / static_cast<double>(draws.size());
        row.bias = row.mean - table.target;
        row.mse = std::accumulate(table.squared_errors[e].begin(), table.squared_errors[e].end(), 0.0) /
                  static_cast<double>(draws.size());
        row.se = se_of_mean(table.squared_errors[e]);
        table.rows.push_back(row);
    }
    return table;
}

PowerTable power_experiment(TestKind test, const std::vector<std::string>& estimators, const MeanFunction& family,
                            const std::vector<double>& xi_grid, std::size_t n, int reps, std::uint64_t seed,
                            const NoiseModel& noise, double level, const WzOptions& wz, unsigned workers) {
    check_reps(reps);
    if (estimators.empty() || xi_grid.empty()) throw ConfigError("power_experiment: empty estimator set or xi grid");
    if (!(level > 0.0 && level < 1.0)) throw DomainError("test level must lie in (0, 1)");
    WzOptions wzo = wz;
    wzo.level = level;
    const double critical = test == TestKind::ks ? kolmogorov_critical_value(level) : wz_critical_value(n, wzo);
    const long k_n = test == TestKind::wz ? wz_window(n, wzo.beta) : 0;
    const std::size_t cols = xi_grid.size() + 1;  // last column is the null (xi = 0)
    // stats[r][e * cols + g]
    const auto stats = run_replications(
        static_cast<std::size_t>(reps), seed, workers, [&](std::size_t, std::mt19937_64& rng) {
            const auto z = simulate_noise(noise, n, rng);
            std::vector<double> out(estimators.size() * cols);
            for (std::size_t g = 0; g < cols; ++g) {
                MeanFunction mean = family;
                mean.xi = g < xi_grid.size() ? xi_grid[g] : 0.0;
                std::vector<double> x(z);
                for (long i = 1; i <= static_cast<long>(n); ++i)
                    x[static_cast<std::size_t>(i - 1)] += mean.value(i, static_cast<long>(n));
                const TimeSeries ts(x);
                for (std::size_t e = 0; e < estimators.size(); ++e) {
                    const double v = std::max(estimate_by_preset(estimators[e], ts), 1e-12);
                    out[e * cols + g] = test == TestKind::ks ? ks_test(ts, v, level).statistic
                                                             : wz_statistic(x, k_n, v);
                }
            }
            return out;
        });
    PowerTable table;
    for (std::size_t e = 0; e < estimators.size(); ++e) {
        std::vector<double> null;
        for (const auto& r : stats) null.push_back(r[e * cols + cols - 1]);
        const double nq = quantile_type7(null, 1.0 - level);
        table.null_quantiles.push_back(nq);
        for (std::size_t g = 0; g < xi_grid.size(); ++g) {
            PowerCell cell;
            cell.estimator = estimators[e];
            cell.xi = xi_grid[g];
            double rej = 0.0, adj = 0.0;
            for (const auto& r : stats) {
                rej += r[e * cols + g] > critical ? 1.0 : 0.0;
                adj += r[e * cols + g] > nq ? 1.0 : 0.0;
            }
            cell.power = rej / static_cast<double>(stats.size());
            cell.adjusted_power = adj / static_cast<double>(stats.size());
            cell.se = std::sqrt(cell.power * (1.0 - cell.power) / static_cast<double>(stats.size()));
            table.cells.push_back(cell);
        }
    }
    return table;
}

std::vector<CoverageRow> coverage_experiment(std::size_t n, const std::vector<double>& b_grid, const NoiseModel& noise,
                                             int reps, std::uint64_t seed, const std::string& estimator, int scb_reps,
                                             unsigned workers) {
    check_reps(reps);
    MeanFunction mean;
    mean.kind = MeanKind::cosine;
    std::vector<CoverageRow> rows;
    for (double b : b_grid) {
        ScbOptions opt;
        opt.b_star = b;
        opt.reps = scb_reps;
        opt.estimator = estimator;
        opt.workers = workers;
        // calibrate once up front; the replications then hit the cache
        scb_quantile(n, opt);
        const auto results = run_replications(
            static_cast<std::size_t>(reps), seed, workers, [&](std::size_t, std::mt19937_64& rng) {
                const auto x = generate(noise, mean, n, rng);
                auto o = opt;
                o.workers = 1;
                const auto band = scb(x, o);
                bool covered = true;
                for (std::size_t j = 0; j < band.grid.size(); ++j) {
                    const double truth = std::cos(2.0 * std::numbers::pi * band.grid[j]);
                    if (std::abs(band.mu_hat[j] - truth) > band.half_width) covered = false;
                }
                return std::array<double, 2>{covered ? 1.0 : 0.0, band.half_width};
            });
        CoverageRow row;
        row.b = b;
        for (const auto& r : results) {
            row.coverage += r[0];
            row.mean_half_width += r[1];
        }
        row.coverage /= static_cast<double>(results.size());
        row.mean_half_width /= static_cast<double>(results.size());
        row.se = std::sqrt(row.coverage * (1.0 - row.coverage) / static_cast<double>(results.size()));
        rows.push_back(row);
    }
    return rows;
}

} // namespace lrvlab
