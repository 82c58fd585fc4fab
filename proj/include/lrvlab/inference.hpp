#ifndef LRVLAB_INFERENCE_HPP
#define LRVLAB_INFERENCE_HPP

#include "lrvlab/estimators.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lrvlab {

struct TestResult {
    double statistic = 0.0;
    double critical_value = 0.0;
    double level = 0.05;
    bool reject = false;
    double lrv_used = 0.0;
    /// 1-based argmax of the scan (the break-location diagnostic).
    long location = 0;
};

/// P(sup |Brownian bridge| <= x) by the alternating series (50 terms).
double kolmogorov_cdf(double x);
/// Upper-`level` quantile of the Kolmogorov distribution.
double kolmogorov_critical_value(double level);

/// CUSUM statistic max_k |sum_{i<=k}(X_i - Xbar)| / sqrt(n v_hat).
TestResult ks_test(const TimeSeries& x, double v_hat, double level = 0.05);

struct WzOptions {
    double beta = 0.6;
    double level = 0.05;
    int calibration_reps = 10000;
    std::uint64_t seed = 20070101;
    unsigned workers = 0;
};

/// ceil(n^beta).
long wz_window(std::size_t n, double beta);

/// Largest local difference of adjacent k_n-sums, scaled by k_n sqrt(v_hat).
double wz_statistic(std::span<const double> x, long k_n, double v_hat, long* location = nullptr);

/// Null quantile of the WZ statistic from iid N(0,1) samples of the same n
/// (v = 1); cached per (n, beta, level, reps, seed).
double wz_critical_value(std::size_t n, const WzOptions& options = {});

TestResult wz_test(const TimeSeries& x, double v_hat, const WzOptions& options = {});

/// Jackknifed Gaussian-kernel smoother 2 mu_b(t) - mu_{b sqrt 2}(t), with
/// locally normalized weights, evaluated at arbitrary points of [0, 1].
std::vector<double> local_linear_trend_at(std::span<const double> x, double b, std::span<const double> t);
/// The same on the design points i/n.
std::vector<double> local_linear_trend(const TimeSeries& x, double b);

struct TrendBand {
    std::vector<double> grid;
    std::vector<double> mu_hat;
    double half_width = 0.0;
    double level = 0.95;
    double bandwidth = 0.0;  // b_n
    double b_star = 0.0;
    double v_hat = 0.0;
    double gamma0 = 0.0;
    double quantile = 0.0;   // q_level
};

struct ScbOptions {
    double level = 0.95;
    /// Pilot bandwidth b*; defaults to 0.017 (200/n)^{1/5}.
    std::optional<double> b_star;
    int reps = 1000;
    std::uint64_t seed = 20070102;
    unsigned workers = 0;
    /// Estimator preset for v (see preset_names()).
    std::string estimator = "paper-default";
    int grid_points = 201;
};

double default_b_star(std::size_t n);

/// b_n = 2 (v/gamma0)^{1/5} b*, falling back to 2 b* when either input is
/// degenerate, capped at 0.25.
double scb_bandwidth(double v_hat, double gamma0, double b_star);

/// Monte Carlo q_level of sup_t |mu-hat(t)| on iid N(0,1) data, bandwidth
/// recomputed per replicate. Cached.
double scb_quantile(std::size_t n, const ScbOptions& options);

TrendBand scb(const TimeSeries& x, const ScbOptions& options = {});

} // namespace lrvlab

#endif
