#include "lrvlab/inference.hpp"

#include "lrvlab/error.hpp"
#include "lrvlab/parallel.hpp"
#include "lrvlab/rcp.hpp"
#include "lrvlab/selection.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

namespace lrvlab {

double kolmogorov_cdf(double x) {
    if (x <= 0.0) return 0.0;
    double acc = 0.0;
    for (int j = 1; j <= 50; ++j) acc += ((j % 2) ? 1.0 : -1.0) * std::exp(-2.0 * j * j * x * x);
    return std::clamp(1.0 - 2.0 * acc, 0.0, 1.0);
}

double kolmogorov_critical_value(double level) {
    if (!(level > 0.0 && level < 1.0)) throw DomainError("test level must lie in (0, 1)");
    const double target = 1.0 - level;
    auto f = [&](double x) { return kolmogorov_cdf(x) - target; };
    boost::uintmax_t iters = 200;
    const auto [lo, hi] = boost::math::tools::toms748_solve(f, 0.2, 10.0, boost::math::tools::eps_tolerance<double>(50),
                                                            iters);
    return 0.5 * (lo + hi);
}

TestResult ks_test(const TimeSeries& x, double v_hat, double level) {
    if (!(v_hat > 0.0) || !std::isfinite(v_hat)) throw DomainError("ks_test: the long-run variance must be positive");
    if (x.dims() != 1) throw DomainError("ks_test: univariate series expected");
    const auto col = x.column(0);
    const double mean = sample_mean(col);
    double partial = 0.0, best = 0.0;
    long where = 0;
    for (std::size_t k = 0; k < col.size(); ++k) {
        partial += col[k] - mean;
        if (std::abs(partial) > best) {
            best = std::abs(partial);
            where = static_cast<long>(k) + 1;
        }
    }
    TestResult r;
    r.statistic = best / std::sqrt(static_cast<double>(col.size()) * v_hat);
    r.critical_value = kolmogorov_critical_value(level);
    r.level = level;
    r.reject = r.statistic > r.critical_value;
    r.lrv_used = v_hat;
    r.location = where;
    return r;
}

long wz_window(std::size_t n, double beta) {
    return tolerant_ceil(std::pow(static_cast<double>(n), beta));
}

double wz_statistic(std::span<const double> x, long k_n, double v_hat, long* location) {
    const long n = static_cast<long>(x.size());
    if (k_n < 1 || 2 * k_n >= n) throw DomainError("wz statistic needs 1 <= k_n and 2 k_n < n");
    double best = 0.0;
    long where = k_n;
    // 1-based i in [k_n, n - k_n]: forward sum X_{i+1..i+k_n}, backward X_{i-k_n+1..i}
    for (long i = k_n; i <= n - k_n; ++i) {
        double fwd = 0.0, bwd = 0.0;
        for (long j = 0; j < k_n; ++j) {
            fwd += x[static_cast<std::size_t>(i + j)];
            bwd += x[static_cast<std::size_t>(i - 1 - j)];
        }
        const double d = std::abs(fwd - bwd);
        if (d > best) {
            best = d;
            where = i;
        }
    }
    if (location) *location = where;
    return best / (static_cast<double>(k_n) * std::sqrt(v_hat));
}

namespace {

void check_beta(double beta) {
    if (!(beta > 0.5 && beta < 2.0 / 3.0)) throw DomainError("wz_test: beta must lie in (1/2, 2/3)");
}

// Same scan via prefix sums; used only on simulated null samples.
double wz_statistic_fast(const std::vector<double>& x, long k_n) {
    const long n = static_cast<long>(x.size());
    std::vector<double> prefix(x.size() + 1, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) prefix[i + 1] = prefix[i] + x[i];
    double best = 0.0;
    for (long i = k_n; i <= n - k_n; ++i) {
        const double fwd = prefix[static_cast<std::size_t>(i + k_n)] - prefix[static_cast<std::size_t>(i)];
        const double bwd = prefix[static_cast<std::size_t>(i)] - prefix[static_cast<std::size_t>(i - k_n)];
        best = std::max(best, std::abs(fwd - bwd));
    }
    return best / static_cast<double>(k_n);
}

std::vector<double> normal_sample(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> z;
    std::vector<double> x(n);
    for (auto& v : x) v = z(rng);
    return x;
}

double upper_quantile(std::vector<double> sample, double prob) { return quantile_type7(std::move(sample), prob); }

} // namespace

double wz_critical_value(std::size_t n, const WzOptions& options) {
    check_beta(options.beta);
    if (!(options.level > 0.0 && options.level < 1.0)) throw DomainError("wz_test: level must lie in (0, 1)");
    if (options.calibration_reps < 100) throw ConfigError("wz_test: calibration needs at least 100 replications");
    // the worker count is part of the key only so that determinism across worker counts stays testable
    using Key = std::tuple<std::size_t, double, double, int, std::uint64_t, unsigned>;
    static std::mutex mutex;
    static std::map<Key, double> cache;
    const Key key{n, options.beta, options.level, options.calibration_reps, options.seed, options.workers};
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    const long k_n = wz_window(n, options.beta);
    if (2 * k_n >= static_cast<long>(n)) throw DomainError("wz_test: 2 k_n must be below n");
    const auto stats = run_replications(static_cast<std::size_t>(options.calibration_reps), options.seed, options.workers,
                                        [&](std::size_t, std::mt19937_64& rng) {
                                            return wz_statistic_fast(normal_sample(n, rng), k_n);
                                        });
    const double q = upper_quantile(stats, 1.0 - options.level);
    std::lock_guard lock(mutex);
    cache.emplace(key, q);
    return q;
}

TestResult wz_test(const TimeSeries& x, double v_hat, const WzOptions& options) {
    check_beta(options.beta);
    if (!(v_hat > 0.0) || !std::isfinite(v_hat)) throw DomainError("wz_test: the long-run variance must be positive");
    if (x.dims() != 1) throw DomainError("wz_test: univariate series expected");
    const long k_n = wz_window(x.size(), options.beta);
    if (2 * k_n >= static_cast<long>(x.size())) {
        std::ostringstream msg;
        msg << "wz_test: window k_n = " << k_n << " too large for n = " << x.size();
        throw InsufficientDataError(msg.str());
    }
    TestResult r;
    const auto col = x.column(0);
    r.statistic = wz_statistic(col, k_n, v_hat, &r.location);
    r.critical_value = wz_critical_value(x.size(), options);
    r.level = options.level;
    r.reject = r.statistic > r.critical_value;
    r.lrv_used = v_hat;
    return r;
}

std::vector<double> local_linear_trend_at(std::span<const double> x, double b, std::span<const double> t) {
    if (!(b > 0.0 && b < 0.5)) throw DomainError("trend bandwidth b must lie in (0, 1/2)");
    const std::size_t n = x.size();
    if (n < 2) throw InsufficientDataError("trend estimation needs at least two observations");
    auto smooth = [&](double tt, double bw) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double u = (tt - static_cast<double>(i + 1) / static_cast<double>(n)) / bw;
            if (std::abs(u) > 40.0) continue;
            const double w = std::exp(-0.5 * u * u);
            num += w * x[i];
            den += w;
        }
        if (!(den > 1e-300)) {
            std::ostringstream msg;
            msg << "kernel weights vanish at t = " << tt << " with bandwidth " << bw;
            throw NumericError(msg.str());
        }
        return num / den;
    };
    std::vector<double> out(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) out[j] = 2.0 * smooth(t[j], b) - smooth(t[j], b * std::sqrt(2.0));
    return out;
}

std::vector<double> local_linear_trend(const TimeSeries& x, double b) {
    if (x.dims() != 1) throw DomainError("trend estimation expects a univariate series");
    std::vector<double> grid(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) grid[i] = static_cast<double>(i + 1) / static_cast<double>(x.size());
    return local_linear_trend_at(x.column(0), b, grid);
}

double default_b_star(std::size_t n) { return 0.017 * std::pow(200.0 / static_cast<double>(n), 0.2); }

double scb_bandwidth(double v_hat, double gamma0, double b_star) {
    double b = 2.0 * b_star;
    if (v_hat > 0.0 && gamma0 > 0.0 && std::isfinite(v_hat / gamma0)) b = 2.0 * std::pow(v_hat / gamma0, 0.2) * b_star;
    return std::min(b, 0.25);
}

namespace {

constexpr double kVarianceFloor = 1e-12;

struct BandCore {
    double v_hat = 0.0;
    double gamma0 = 0.0;
    double b_n = 0.0;
};

BandCore band_core(std::span<const double> x, double b_star, const std::string& estimator) {
    BandCore c;
    const TimeSeries ts{std::vector<double>(x.begin(), x.end())};
    c.v_hat = std::max(estimate_by_preset(estimator, ts), 0.0);
    std::vector<double> grid(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) grid[i] = static_cast<double>(i + 1) / static_cast<double>(x.size());
    const auto fit = local_linear_trend_at(x, b_star, grid);
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) ss += (x[i] - fit[i]) * (x[i] - fit[i]);
    c.gamma0 = ss / static_cast<double>(x.size());
    c.b_n = scb_bandwidth(c.v_hat, c.gamma0, b_star);
    return c;
}

std::vector<double> band_grid(double b_n, int points) {
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int j = 0; j < points; ++j) g[static_cast<std::size_t>(j)] = b_n + (1.0 - 2.0 * b_n) * j / (points - 1);
    return g;
}

void check_scb_options(const ScbOptions& o) {
    if (!(o.level > 0.5 && o.level < 1.0)) throw DomainError("SCB level must lie in (0.5, 1)");
    if (o.reps < 200) throw ConfigError("SCB calibration needs at least 200 replications");
    if (o.grid_points < 2) throw ConfigError("SCB grid needs at least two points");
    if (o.b_star && !(*o.b_star > 0.0 && *o.b_star < 0.5)) throw DomainError("b* must lie in (0, 1/2)");
}

} // namespace

double scb_quantile(std::size_t n, const ScbOptions& options) {
    check_scb_options(options);
    const double b_star = options.b_star.value_or(default_b_star(n));
    using Key = std::tuple<std::size_t, double, double, int, std::uint64_t, std::string, int>;
    static std::mutex mutex;
    static std::map<Key, double> cache;
    const Key key{n, b_star, options.level, options.reps, options.seed, options.estimator, options.grid_points};
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    const auto sups = run_replications(static_cast<std::size_t>(options.reps), options.seed, options.workers,
                                       [&](std::size_t, std::mt19937_64& rng) {
                                           const auto x = normal_sample(n, rng);
                                           const auto core = band_core(x, b_star, options.estimator);
                                           const auto fit = local_linear_trend_at(
                                               x, core.b_n, band_grid(core.b_n, options.grid_points));
                                           double sup = 0.0;
                                           for (double v : fit) sup = std::max(sup, std::abs(v));
                                           return sup;
                                       });
    const double q = upper_quantile(sups, options.level);
    std::lock_guard lock(mutex);
    cache.emplace(key, q);
    return q;
}

TrendBand scb(const TimeSeries& x, const ScbOptions& options) {
    check_scb_options(options);
    if (x.dims() != 1) throw DomainError("SCB expects a univariate series");
    const auto col = x.column(0);
    TrendBand band;
    band.level = options.level;
    band.b_star = options.b_star.value_or(default_b_star(x.size()));
    const auto core = band_core(col, band.b_star, options.estimator);
    band.v_hat = std::max(core.v_hat, kVarianceFloor);
    band.gamma0 = core.gamma0;
    band.bandwidth = core.b_n;
    band.grid = band_grid(core.b_n, options.grid_points);
    band.mu_hat = local_linear_trend_at(col, core.b_n, band.grid);
    band.quantile = scb_quantile(x.size(), options);
    band.half_width = std::sqrt(band.v_hat) * band.quantile;
    return band;
}

} // namespace lrvlab
