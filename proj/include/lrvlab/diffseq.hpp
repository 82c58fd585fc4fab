#ifndef LRVLAB_DIFFSEQ_HPP
#define LRVLAB_DIFFSEQ_HPP

#include <span>
#include <vector>

namespace lrvlab {

class Kernel;

/// A normalized m-th order difference sequence d_0..d_m together with its
/// lagged self-products delta_s = sum_j d_j d_{j-|s|}.
///
/// For m >= 1 the coefficients sum to zero and delta_0 = 1. The zeroth-order
/// sequence (d = {1}) stands for global mean centering and is exempt from the
/// zero-sum condition. Instances are immutable.
class DifferenceSequence {
public:
    /// The zeroth-order sequence used by the classical (mean-centered) estimator.
    static DifferenceSequence zeroth();

    int order() const noexcept { return static_cast<int>(d_.size()) - 1; }
    std::span<const double> coefficients() const noexcept { return d_; }
    /// delta_0..delta_m.
    std::span<const double> deltas() const noexcept { return delta_; }
    /// delta_{|s|}; zero for |s| > m.
    double delta(int s) const noexcept;
    /// Delta_m = sum_{|s|<=m} delta_s^2.
    double delta_m() const noexcept;

    friend DifferenceSequence normalize(std::span<const double> raw);

private:
    explicit DifferenceSequence(std::vector<double> d);

    std::vector<double> d_;
    std::vector<double> delta_;
};

/// d_j = C(m,j)(-1)^j / C(2m,m)^{1/2}, 1 <= m <= 30.
DifferenceSequence binomial_sequence(int m);

/// d_0 = sqrt(m/(m+1)), d_j = -1/sqrt(m^2+m) for j >= 1.
DifferenceSequence local_sequence(int m);

/// MSE-optimal sequence of order m (1 <= m <= 10): delta_1 = ... = delta_m = -1/(2m).
///
/// Obtained by spectral factorization of z^m sum_s delta_s z^s. The double
/// root at z = 1 is split evenly; of each remaining reciprocal pair the
/// factor keeps real roots outside the unit circle and complex roots inside,
/// with d_0 > 0. This representative coincides with the tabulated sequences
/// for m <= 4; any other choice differs only in d, never in delta.
DifferenceSequence optimal_sequence(int m);

/// Normalizes a raw zero-sum coefficient vector. Sums within 1e-9 of zero are
/// re-centered first; larger violations and all-zero input throw DomainError.
DifferenceSequence normalize(std::span<const double> raw);

/// Finite-m unambiguity quantity 2 sum_{s=1}^{floor(1/lambda)} delta_s K(lambda s)
/// for lambda < 1, and 0 otherwise. A non-zero value with lambda < 1 flags a
/// configuration that cannot be consistent.
double unambiguity_diagnostic(const DifferenceSequence& seq, const Kernel& kernel, double lambda);

} // namespace lrvlab

#endif
