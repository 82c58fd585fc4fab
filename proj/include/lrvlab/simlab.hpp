#ifndef LRVLAB_SIMLAB_HPP
#define LRVLAB_SIMLAB_HPP

#include "lrvlab/estimators.hpp"
#include "lrvlab/inference.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace lrvlab {

enum class NoiseKind { iid_normal, ar, tar, ma };

struct NoiseModel {
    NoiseKind kind = NoiseKind::iid_normal;
    std::vector<double> coeffs;  // AR phi_1..phi_p or MA theta_1..theta_q
    double sigma = 1.0;
    double theta1 = 0.0;
    double theta2 = 0.0;
    /// Divide the noise by the square root of its long-run variance.
    bool normalize_to_unit_lrv = false;

    static NoiseModel iid(double sigma = 1.0);
    static NoiseModel ar(std::vector<double> phi, double sigma = 1.0);
    static NoiseModel ma(std::vector<double> theta, double sigma = 1.0);
    /// Z_i = theta1 Z_{i-1} + e_i if Z_{i-1} >= 0, theta2 Z_{i-1} + e_i otherwise.
    static NoiseModel tar(double theta1, double theta2);
    NoiseModel normalized() const;
    std::string name() const;
};

/// Throws DomainError for non-stationary coefficients.
void check_stationary(const NoiseModel& noise);

/// Long-run variance of the unnormalized model. Closed form for iid, AR, MA
/// and TAR with equal regimes; otherwise a cached long simulation.
double lrv_oracle(const NoiseModel& noise);

/// Target v of the generated noise (1 when normalized).
double target_lrv(const NoiseModel& noise);

constexpr int kBurnIn = 1000;

std::vector<double> simulate_noise(const NoiseModel& noise, std::size_t n, std::mt19937_64& rng);

enum class MeanKind { zero, h1a, h1b, h1c, exp_three_jumps, linear, steps, linear_plus_steps, cosine, spike_drop };

struct MeanFunction {
    MeanKind kind = MeanKind::zero;
    double xi = 1.0;      // magnitude
    double slope = 1.0;   // C for linear kinds
    int steps = 1;        // S for step kinds

    /// Names such as "h1a", "cosine", "linear:C=2", "steps:S=3", "linear_plus_steps:C=1,S=2".
    static MeanFunction parse(std::string_view spec, double xi = 1.0);
    std::string name() const;

    /// mu(i/n) for 1-based i; discontinuities are resolved with integer comparisons.
    double value(long i, long n) const;
    double continuous_part(long i, long n) const;
    double step_part(long i, long n) const;
};

struct MeanDiagnostics {
    double C = 0.0;  // largest lattice slope of the continuous part
    double S = 0.0;  // largest step
    int J = 0;       // number of discontinuities
    long G = 0;      // smallest gap between consecutive change times (including 1 and n+1)
    double V = 0.0;  // lattice variance of mu
};

MeanDiagnostics diagnostics(const MeanFunction& mean, long n);

/// X_i = mu(i/n) + Z_i with the given seed.
TimeSeries generate(const NoiseModel& noise, const MeanFunction& mean, std::size_t n, std::uint64_t seed);
TimeSeries generate(const NoiseModel& noise, const MeanFunction& mean, std::size_t n, std::mt19937_64& rng);

struct MseRow {
    std::string estimator;
    double mean = 0.0;
    double bias = 0.0;
    double mse = 0.0;
    double se = 0.0;  // Monte Carlo standard error of the MSE
};

struct MseTable {
    double target = 0.0;
    std::vector<MseRow> rows;
    /// squared_errors[e][r] for estimator e and replication r.
    std::vector<std::vector<double>> squared_errors;
    /// Standard error of MSE(a) - MSE(b) from the paired replications.
    double paired_se(std::size_t a, std::size_t b) const;
};

MseTable mse_experiment(const std::vector<std::string>& estimators, const NoiseModel& noise, const MeanFunction& mean,
                        std::size_t n, int reps, std::uint64_t seed, unsigned workers = 0);

enum class TestKind { ks, wz };

struct PowerCell {
    std::string estimator;
    double xi = 0.0;
    double power = 0.0;
    double adjusted_power = 0.0;
    double se = 0.0;
};

struct PowerTable {
    std::vector<PowerCell> cells;  // estimator-major, xi-minor
    std::vector<double> null_quantiles;  // per estimator, the empirical null (1 - level) quantile
};

/// Replication r uses the same noise draw for every xi (common random numbers).
PowerTable power_experiment(TestKind test, const std::vector<std::string>& estimators, const MeanFunction& family,
                            const std::vector<double>& xi_grid, std::size_t n, int reps, std::uint64_t seed,
                            const NoiseModel& noise, double level = 0.05, const WzOptions& wz = {},
                            unsigned workers = 0);

struct CoverageRow {
    double b = 0.0;
    double coverage = 0.0;
    double mean_half_width = 0.0;
    double se = 0.0;
};

/// SCB coverage of mu(t) = cos(2 pi t) for each b* in b_grid.
std::vector<CoverageRow> coverage_experiment(std::size_t n, const std::vector<double>& b_grid, const NoiseModel& noise,
                                             int reps, std::uint64_t seed, const std::string& estimator = "paper-default",
                                             int scb_reps = 1000, unsigned workers = 0);

} // namespace lrvlab

#endif
