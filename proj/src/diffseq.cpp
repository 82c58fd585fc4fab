#include "lrvlab/diffseq.hpp"

#include "lrvlab/error.hpp"
#include "lrvlab/kernels.hpp"
#include "lrvlab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

namespace lrvlab {

namespace {

std::vector<double> self_products(const std::vector<double>& d) {
    const std::size_t m = d.size() - 1;
    std::vector<double> delta(m + 1, 0.0);
    for (std::size_t s = 0; s <= m; ++s)
        for (std::size_t j = s; j <= m; ++j) delta[s] += d[j] * d[j - s];
    return delta;
}

} // namespace

DifferenceSequence::DifferenceSequence(std::vector<double> d)
    : d_(std::move(d)), delta_(self_products(d_)) {}

DifferenceSequence DifferenceSequence::zeroth() { return DifferenceSequence({1.0}); }

double DifferenceSequence::delta(int s) const noexcept {
    const int a = s < 0 ? -s : s;
    return a <= order() ? delta_[a] : 0.0;
}

double DifferenceSequence::delta_m() const noexcept {
    double acc = delta_[0] * delta_[0];
    for (std::size_t s = 1; s < delta_.size(); ++s) acc += 2.0 * delta_[s] * delta_[s];
    return acc;
}

DifferenceSequence normalize(std::span<const double> raw) {
    if (raw.size() < 2) throw DomainError("normalize: a difference sequence needs at least two coefficients");
    std::vector<double> d(raw.begin(), raw.end());
    for (double v : d)
        if (!std::isfinite(v)) throw DomainError("normalize: non-finite coefficient");
    const double sum = std::accumulate(d.begin(), d.end(), 0.0);
    if (std::abs(sum) > 1e-9) {
        std::ostringstream msg;
        msg << "normalize: coefficients sum to " << sum << ", not zero";
        throw DomainError(msg.str());
    }
    if (sum != 0.0) {
        const double mean = sum / static_cast<double>(d.size());
        for (double& v : d) v -= mean;
    }
    const double norm = std::sqrt(std::inner_product(d.begin(), d.end(), d.begin(), 0.0));
    if (norm == 0.0) throw DomainError("normalize: all coefficients are zero");
    for (double& v : d) v /= norm;
    return DifferenceSequence(std::move(d));
}

DifferenceSequence binomial_sequence(int m) {
    if (m < 1 || m > 30) throw DomainError("binomial_sequence: order must lie in [1, 30], got " + std::to_string(m));
    // C(2m,m) built as a running product to avoid factorials.
    double central = 1.0;
    for (int k = 1; k <= m; ++k) central = central * (m + k) / k;
    const double scale = 1.0 / std::sqrt(central);
    std::vector<double> d(m + 1);
    double binom = 1.0;
    for (int j = 0; j <= m; ++j) {
        if (j > 0) binom = binom * (m - j + 1) / j;
        d[j] = ((j % 2 == 0) ? 1.0 : -1.0) * binom * scale;
    }
    return normalize(d);
}

DifferenceSequence local_sequence(int m) {
    if (m < 1) throw DomainError("local_sequence: order must be positive, got " + std::to_string(m));
    std::vector<double> d(m + 1, -1.0 / std::sqrt(static_cast<double>(m) * m + m));
    d[0] = std::sqrt(static_cast<double>(m) / (m + 1));
    return normalize(d);
}

DifferenceSequence optimal_sequence(int m) {
    if (m < 1 || m > 10) throw DomainError("optimal_sequence: order must lie in [1, 10], got " + std::to_string(m));
    if (m == 1) return normalize(std::vector<double>{1.0, -1.0});

    // z^m P(z), lowest degree first: coefficient of z^{m+s} is delta_s.
    const double off = -1.0 / (2.0 * m);
    std::vector<double> laurent(2 * m + 1, off);
    laurent[m] = 1.0;
    // z = 1 is a double root (P(1) = sum of deltas = 0, P >= 0 on the circle).
    auto reduced = poly::deflate(poly::deflate(laurent, 1.0), 1.0);
    const auto found = poly::roots(reduced);

    std::vector<double> factor{-1.0, 1.0}; // (z - 1)
    int kept = 0;
    for (const auto& r : found.roots) {
        const double modulus = std::abs(r);
        const bool is_real = std::abs(r.imag()) <= 1e-9 * std::max(1.0, modulus);
        if (is_real) {
            if (modulus > 1.0) {
                const double lin[] = {-r.real(), 1.0};
                factor = poly::multiply(factor, lin);
                ++kept;
            }
        } else if (modulus < 1.0 && r.imag() > 0.0) {
            const double quad[] = {modulus * modulus, -2.0 * r.real(), 1.0};
            factor = poly::multiply(factor, quad);
            kept += 2;
        }
    }
    if (kept != m - 1) {
        std::ostringstream msg;
        msg << "optimal_sequence(" << m << "): root pairing failed, kept " << kept << " of " << (m - 1)
            << " roots after " << found.iterations << " iterations (last correction " << found.max_correction << ")";
        throw NumericError(msg.str());
    }
    if (factor.front() < 0.0)
        for (double& v : factor) v = -v;
    auto seq = normalize(factor);

    double worst = 0.0;
    for (int s = 1; s <= m; ++s) worst = std::max(worst, std::abs(seq.delta(s) - off));
    if (worst > 1e-8) {
        std::ostringstream msg;
        msg << "optimal_sequence(" << m << "): factorization residual " << worst << " after " << found.iterations
            << " iterations";
        throw NumericError(msg.str());
    }
    return seq;
}

double unambiguity_diagnostic(const DifferenceSequence& seq, const Kernel& kernel, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("unambiguity_diagnostic: lambda must be positive");
    if (lambda >= 1.0) return 0.0;
    const auto upper = static_cast<int>(std::floor(1.0 / lambda));
    double acc = 0.0;
    for (int s = 1; s <= std::min(upper, seq.order()); ++s) acc += seq.delta(s) * kernel(lambda * s);
    return 2.0 * acc;
}

} // namespace lrvlab
