#include "lrvlab/estimators.hpp"

#include "lrvlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lrvlab {

TimeSeries::TimeSeries(std::vector<double> data, std::size_t dims) : data_(std::move(data)), dims_(dims), n_(0) {
    if (dims_ == 0) throw DomainError("time series needs at least one column");
    if (data_.size() % dims_ != 0) throw DomainError("time series data size is not a multiple of its dimension");
    n_ = data_.size() / dims_;
    if (n_ < 2) throw InsufficientDataError("time series needs at least two observations");
    for (std::size_t i = 0; i < data_.size(); ++i) {
        if (!std::isfinite(data_[i])) {
            std::ostringstream msg;
            msg << "non-finite observation at row " << i / dims_ + 1 << ", column " << i % dims_ + 1;
            throw DomainError(msg.str());
        }
    }
}

TimeSeries::TimeSeries(std::vector<double> univariate) : TimeSeries(std::move(univariate), 1) {}

std::vector<double> TimeSeries::column(std::size_t s) const {
    if (s >= dims_) throw DomainError("column index out of range");
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = (*this)(i, s);
    return out;
}

double sample_mean(std::span<const double> v) {
    if (v.empty()) throw DomainError("mean of an empty sample");
    // anchoring at the first value keeps the mean of a constant sample exact
    const double anchor = v[0];
    double acc = 0.0;
    for (double x : v) acc += x - anchor;
    return anchor + acc / static_cast<double>(v.size());
}

std::string to_string(Regime r) {
    switch (r) {
    case Regime::optimal: return "optimal";
    case Regime::may_be_optimal: return "may_be_optimal";
    case Regime::suboptimal: return "suboptimal";
    case Regime::inconsistent: return "inconsistent";
    }
    return "unknown";
}

Regime classify_regime(int m, int ell, int h) {
    if (m == 0) return Regime::optimal;
    if (h < ell) return Regime::inconsistent;
    if (h == ell) return Regime::may_be_optimal;
    return Regime::optimal;
}

Regime classify_regime_limit(bool m_divergent, double lambda_limit) {
    if (!(lambda_limit >= 0.0)) throw DomainError("classify_regime_limit: lambda limit must be non-negative");
    if (lambda_limit < 1.0) return Regime::inconsistent;
    if (std::isinf(lambda_limit) || m_divergent) return Regime::suboptimal;
    if (lambda_limit == 1.0) return Regime::may_be_optimal;
    return Regime::optimal;
}

void validate(const EstimatorConfig& config, std::size_t n) {
    if (config.ell < 1) throw ConfigError("bandwidth ell must be at least 1");
    if (config.h < 1) throw ConfigError("lag h must be at least 1");
    if (config.p < 0) throw ConfigError("moment order p must be non-negative");
    const int m = config.m();
    if (m == 0 && config.center_differences == false)
        throw ConfigError("the zeroth-order estimator is mean-centered by definition; center_differences cannot be false");
    const long need = static_cast<long>(m) * config.h + config.ell;
    if (need >= static_cast<long>(n)) {
        std::ostringstream msg;
        msg << "need m*h + ell < n, got m*h + ell = " << need << " with n = " << n;
        throw InsufficientDataError(msg.str());
    }
}

std::vector<double> difference_statistics(const TimeSeries& x, const DifferenceSequence& seq, int h) {
    if (h < 1) throw DomainError("difference_statistics: h must be positive");
    const std::size_t n = x.size();
    const std::size_t S = x.dims();
    const int m = seq.order();
    if (m == 0) {
        std::vector<double> mean(S, 0.0);
        for (std::size_t s = 0; s < S; ++s) mean[s] = sample_mean(x.column(s));
        std::vector<double> out(n * S);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t s = 0; s < S; ++s) out[i * S + s] = x(i, s) - mean[s];
        return out;
    }
    const std::size_t lead = static_cast<std::size_t>(m) * static_cast<std::size_t>(h);
    if (lead >= n) {
        std::ostringstream msg;
        msg << "difference statistics need m*h < n, got m*h = " << lead << " with n = " << n;
        throw InsufficientDataError(msg.str());
    }
    const auto d = seq.coefficients();
    std::vector<double> out((n - lead) * S, 0.0);
    // sum_j d_j X_{i-jh} written as sum_{j>=1} d_j (X_{i-jh} - X_i), which uses sum_j d_j = 0
    // so that constant series give exact zeros
    for (std::size_t i = lead; i < n; ++i)
        for (int j = 1; j <= m; ++j) {
            const std::size_t src = i - static_cast<std::size_t>(j) * h;
            for (std::size_t s = 0; s < S; ++s) out[(i - lead) * S + s] += d[j] * (x(src, s) - x(i, s));
        }
    return out;
}

std::vector<double> gamma_hat_d(std::span<const double> d, std::size_t dims, long k, std::size_t n) {
    if (dims == 0 || d.size() % dims != 0) throw DomainError("gamma_hat_d: malformed difference statistics");
    const std::size_t rows = d.size() / dims;
    const std::size_t a = static_cast<std::size_t>(k < 0 ? -k : k);
    if (a >= rows) throw DomainError("gamma_hat_d: |k| must be below the number of difference statistics");
    std::vector<double> g(dims * dims, 0.0);
    for (std::size_t i = a; i < rows; ++i)
        for (std::size_t r = 0; r < dims; ++r)
            for (std::size_t c = 0; c < dims; ++c) g[r * dims + c] += d[i * dims + r] * d[(i - a) * dims + c];
    for (double& v : g) v /= static_cast<double>(n);
    return g;
}

namespace {

std::vector<double> prepared_differences(const TimeSeries& x, const EstimatorConfig& config) {
    auto d = difference_statistics(x, config.seq, config.h);
    if (config.m() > 0 && config.center_differences.value_or(false)) {
        const std::size_t S = x.dims();
        const std::size_t rows = d.size() / S;
        for (std::size_t s = 0; s < S; ++s) {
            double sum = 0.0;
            for (std::size_t i = 0; i < rows; ++i) sum += d[i * S + s];
            const double mean = sum / static_cast<double>(x.size());
            for (std::size_t i = 0; i < rows; ++i) d[i * S + s] -= mean;
        }
    }
    return d;
}

double lag_weight(const EstimatorConfig& config, long k) {
    const double w = config.kernel(static_cast<double>(k) / config.ell);
    if (config.p == 0) return w;
    if (k == 0) return 0.0;
    return std::pow(static_cast<double>(k < 0 ? -k : k), config.p) * w;
}

LrvResult estimate(const TimeSeries& x, const EstimatorConfig& config) {
    validate(config, x.size());
    const std::size_t S = x.dims();
    const auto d = prepared_differences(x, config);
    LrvResult res;
    res.config = config;
    res.dims = S;
    res.regime = classify_regime(config.m(), config.ell, config.h);
    res.matrix.assign(S * S, 0.0);
    res.gamma_d.reserve(static_cast<std::size_t>(config.ell) * S * S);
    for (long k = 0; k < config.ell; ++k) {
        const auto g = gamma_hat_d(d, S, k, x.size());
        res.gamma_d.insert(res.gamma_d.end(), g.begin(), g.end());
        const double w = lag_weight(config, k);
        if (w == 0.0) continue;
        for (std::size_t r = 0; r < S; ++r)
            for (std::size_t c = 0; c < S; ++c) {
                // Lags k and -k share gamma_{|k|}.
                res.matrix[r * S + c] += (k == 0 ? 1.0 : 2.0) * w * g[r * S + c];
            }
    }
    if (S > 1 && config.symmetrize) {
        for (std::size_t r = 0; r < S; ++r)
            for (std::size_t c = r + 1; c < S; ++c) {
                const double avg = 0.5 * (res.matrix[r * S + c] + res.matrix[c * S + r]);
                res.matrix[r * S + c] = avg;
                res.matrix[c * S + r] = avg;
            }
    }
    res.value = res.matrix[0];
    return res;
}

} // namespace

LrvResult lrv(const TimeSeries& x, const EstimatorConfig& config) { return estimate(x, config); }

LrvResult lrv_multivariate(const TimeSeries& x, const EstimatorConfig& config) {
    if (x.dims() < 2) throw DomainError("lrv_multivariate: series must have at least two columns");
    return estimate(x, config);
}

double long_run_correlation(const TimeSeries& x, const EstimatorConfig& config) {
    if (x.dims() != 2) throw DomainError("long_run_correlation: series must have exactly two columns");
    const auto res = lrv_multivariate(x, config);
    const double v11 = res.matrix[0];
    const double v22 = res.matrix[3];
    if (!(v11 > 0.0) || !(v22 > 0.0)) {
        std::ostringstream msg;
        msg << "long-run variance estimates are not positive (" << v11 << ", " << v22
            << "); use a longer series or a different bandwidth/kernel";
        throw NumericError(msg.str());
    }
    return std::clamp(res.matrix[1] / std::sqrt(v11 * v22), -1.0, 1.0);
}

LrvResult lrv_subsampling(const TimeSeries& x, const EstimatorConfig& config, Overlap overlap) {
    validate(config, x.size());
    if (config.p != 0) throw ConfigError("the subsampling estimator is defined for p = 0 only");
    const std::size_t S = x.dims();
    const std::size_t n = x.size();
    const auto d = prepared_differences(x, config);
    const long lead = static_cast<long>(config.m()) * config.h;
    const long ell = config.ell;

    std::vector<long> ends;  // 1-based block end times i with block {i-ell+1..i}
    if (overlap == Overlap::full) {
        for (long i = lead + ell; i <= static_cast<long>(n); ++i) ends.push_back(i);
    } else {
        const long step = lead + 1 + ell;
        for (long i = step; i <= static_cast<long>(n); i += step) ends.push_back(i);
    }
    if (ends.empty()) throw InsufficientDataError("subsampling estimator: no complete block fits in the series");

    // Row r of d is time lead+1+r. prefix[lag][t] accumulates D_t D_{t-lag}^T.
    const std::size_t rows = d.size() / S;
    std::vector<double> total(S * S, 0.0);
    std::vector<double> prefix((rows + 1) * S * S);
    for (long lag = 0; lag < ell; ++lag) {
        const double w = config.kernel(static_cast<double>(lag) / ell) / static_cast<double>(ell - lag);
        std::fill(prefix.begin(), prefix.begin() + static_cast<long>(S * S), 0.0);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t a = 0; a < S; ++a)
                for (std::size_t b = 0; b < S; ++b) {
                    const double prod = r >= static_cast<std::size_t>(lag)
                                            ? d[r * S + a] * d[(r - lag) * S + b]
                                            : 0.0;
                    prefix[(r + 1) * S * S + a * S + b] = prefix[r * S * S + a * S + b] + prod;
                }
        if (w == 0.0) continue;
        for (long i : ends) {
            // pairs (t, t-lag) with both in the block: t from i-ell+1+lag to i
            const long r_hi = i - lead - 1;
            const long r_lo = i - ell + lag - lead;
            for (std::size_t a = 0; a < S; ++a)
                for (std::size_t b = 0; b < S; ++b) {
                    const double sum = prefix[static_cast<std::size_t>(r_hi + 1) * S * S + a * S + b] -
                                       prefix[static_cast<std::size_t>(r_lo) * S * S + a * S + b];
                    total[a * S + b] += w * sum;
                    if (lag != 0) total[b * S + a] += w * sum;
                }
        }
    }
    LrvResult res;
    res.config = config;
    res.dims = S;
    res.regime = classify_regime(config.m(), config.ell, config.h);
    res.matrix.resize(S * S);
    for (std::size_t e = 0; e < S * S; ++e) res.matrix[e] = total[e] / static_cast<double>(ends.size());
    res.value = res.matrix[0];
    return res;
}

double gamma_hat_x(const TimeSeries& x, long k) {
    const std::size_t n = x.size();
    const std::size_t a = static_cast<std::size_t>(k < 0 ? -k : k);
    if (a >= n) throw DomainError("gamma_hat_x: |k| must be below n");
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x(i);
    mean /= static_cast<double>(n);
    double acc = 0.0;
    for (std::size_t i = a; i < n; ++i) acc += (x(i) - mean) * (x(i - a) - mean);
    return acc / static_cast<double>(n);
}

std::pair<double, double> acvf_identity_check(const TimeSeries& x, long k) {
    const std::size_t n = x.size();
    const std::size_t a = static_cast<std::size_t>(k < 0 ? -k : k);
    if (a >= n) throw DomainError("acvf_identity_check: |k| must be at most n - 1");
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x(i);
    mean /= static_cast<double>(n);
    const double lhs = gamma_hat_x(x, k);
    const double g0 = gamma_hat_x(x, 0);
    double diffs = 0.0;
    for (std::size_t j = a; j < n; ++j) diffs += (x(j) - x(j - a)) * (x(j) - x(j - a));
    double edges = 0.0;
    for (std::size_t j = 0; j < a; ++j) edges += (x(j) - mean) * (x(j) - mean);
    for (std::size_t j = n - a; j < n; ++j) edges += (x(j) - mean) * (x(j) - mean);
    const double two_n = 2.0 * static_cast<double>(n);
    return {lhs, g0 - diffs / two_n - edges / two_n};
}

double lrv_differencing_kernel(const TimeSeries& x, const EstimatorConfig& config) {
    validate(config, x.size());
    const long reach = std::min<long>(static_cast<long>(config.ell) + static_cast<long>(config.m()) * config.h,
                                      static_cast<long>(x.size()) - 1);
    double acc = 0.0;
    for (long k = -reach; k <= reach; ++k)
        acc += k_diff_lattice(config.kernel, config.seq, config.ell, config.h, k) * gamma_hat_x(x, k);
    return acc;
}

} // namespace lrvlab
