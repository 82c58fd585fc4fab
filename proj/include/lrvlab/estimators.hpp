#ifndef LRVLAB_ESTIMATORS_HPP
#define LRVLAB_ESTIMATORS_HPP

#include "lrvlab/diffseq.hpp"
#include "lrvlab/kernels.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lrvlab {

/// n x S real observations stored row-major (row i holds X_{i+1}).
class TimeSeries {
public:
    TimeSeries(std::vector<double> data, std::size_t dims);
    explicit TimeSeries(std::vector<double> univariate);

    std::size_t size() const noexcept { return n_; }
    std::size_t dims() const noexcept { return dims_; }
    double operator()(std::size_t i, std::size_t s = 0) const noexcept { return data_[i * dims_ + s]; }
    std::span<const double> data() const noexcept { return data_; }
    std::vector<double> column(std::size_t s) const;

private:
    std::vector<double> data_;
    std::size_t dims_;
    std::size_t n_;
};

/// Arithmetic mean, exact for constant input.
double sample_mean(std::span<const double> v);

enum class Regime { optimal, may_be_optimal, suboptimal, inconsistent };

std::string to_string(Regime r);

/// Tag for a finite configuration: m = 0 is the classical estimator and is
/// tagged optimal; otherwise h < ell, h = ell and h > ell map to the
/// inconsistent, may-be-optimal and optimal rows.
Regime classify_regime(int m, int ell, int h);

/// Limit classification by (m finite or divergent, lambda limit in [0, inf]).
/// Cells that read "inconsistent or suboptimal" report the worse case.
Regime classify_regime_limit(bool m_divergent, double lambda_limit);

struct EstimatorConfig {
    DifferenceSequence seq = DifferenceSequence::zeroth();
    Kernel kernel = Kernel::bartlett();
    int ell = 1;
    int h = 1;
    int p = 0;
    /// Subtract the mean of D before forming autocovariances. Unset means
    /// the default: on for m = 0 (global mean centering), off otherwise.
    std::optional<bool> center_differences;
    /// Multivariate only: return (M + M^T)/2 rather than the raw matrix.
    bool symmetrize = true;

    int m() const noexcept { return seq.order(); }
    double lambda() const noexcept { return static_cast<double>(h) / ell; }
};

struct LrvResult {
    /// Univariate estimate (the [0,0] entry for multivariate input).
    double value = 0.0;
    /// S x S row-major estimate; a single entry for univariate input.
    std::vector<double> matrix;
    std::size_t dims = 1;
    /// gamma_k^D for k = 0..ell-1; S x S blocks concatenated when S > 1.
    std::vector<double> gamma_d;
    EstimatorConfig config;
    Regime regime = Regime::optimal;
};

/// Rows mh+1..n of D_i = sum_j d_j X_{i-jh} (n - mh rows x S). For m = 0
/// returns X_i minus the column mean for all i.
std::vector<double> difference_statistics(const TimeSeries& x, const DifferenceSequence& seq, int h);

/// gamma_k^D = (1/n) sum_{i=mh+|k|+1}^n D_i D_{i-|k|}^T where `d` holds rows
/// mh+1..n (rows x dims). Returns a dims x dims row-major block.
std::vector<double> gamma_hat_d(std::span<const double> d, std::size_t dims, long k, std::size_t n);

LrvResult lrv(const TimeSeries& x, const EstimatorConfig& config);

enum class Overlap { full, none };

/// Subsampling (batched) form: averages sum_{t,t' in block} K(|t-t'|/ell)/(ell-|t-t'|) D_t D_t'
/// over blocks ending at i. `full` uses every admissible block end from
/// mh+ell on; `none` uses multiples of mh+1+ell.
LrvResult lrv_subsampling(const TimeSeries& x, const EstimatorConfig& config, Overlap overlap);

/// Both sides of the exact lag-k sample autocovariance identity
/// gamma_k = gamma_0 - (1/2n) sum (x_j - x_{j-k})^2 - (1/2n)(edge terms).
std::pair<double, double> acvf_identity_check(const TimeSeries& x, long k);

/// Centered sample autocovariance (1/n) sum (x_i - xbar)(x_{i-|k|} - xbar).
double gamma_hat_x(const TimeSeries& x, long k);

/// sum_{|k| <= ell + mh} K_diff(k/ell) gamma_k^X: the raw-autocovariance
/// representation of the difference-based estimator (p = 0).
double lrv_differencing_kernel(const TimeSeries& x, const EstimatorConfig& config);

LrvResult lrv_multivariate(const TimeSeries& x, const EstimatorConfig& config);

/// v[0,1] / sqrt(v[0,0] v[1,1]) clamped to [-1, 1].
double long_run_correlation(const TimeSeries& x, const EstimatorConfig& config);

/// Throws when the configuration cannot be applied to a series of length n.
void validate(const EstimatorConfig& config, std::size_t n);

} // namespace lrvlab

#endif
