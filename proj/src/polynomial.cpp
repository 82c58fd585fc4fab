#include "lrvlab/polynomial.hpp"

#include "lrvlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace lrvlab::poly {

std::complex<double> evaluate(std::span<const double> coeffs, std::complex<double> z) {
    std::complex<double> acc{0.0, 0.0};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
}

std::vector<double> multiply(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return {};
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

std::vector<double> deflate(std::span<const double> coeffs, double root) {
    if (coeffs.size() < 2) return {};
    const std::size_t deg = coeffs.size() - 1;
    std::vector<double> out(deg);
    double carry = coeffs[deg];
    for (std::size_t k = deg; k-- > 0;) {
        out[k] = carry;
        carry = coeffs[k] + carry * root;
    }
    return out;
}

namespace {

std::pair<std::complex<double>, std::complex<double>>
value_and_derivative(std::span<const double> c, std::complex<double> z) {
    std::complex<double> p{0.0, 0.0}, dp{0.0, 0.0};
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        dp = dp * z + p;
        p = p * z + *it;
    }
    return {p, dp};
}

} // namespace

RootResult roots(std::span<const double> coeffs, int max_iterations, double tolerance) {
    std::size_t deg = coeffs.size();
    while (deg > 0 && coeffs[deg - 1] == 0.0) --deg;
    if (deg == 0) throw DomainError("polynomial roots: zero polynomial");
    const std::span<const double> c = coeffs.first(deg);
    const int n = static_cast<int>(deg) - 1;
    RootResult result;
    if (n == 0) return result;

    // Start on a circle whose radius matches the geometric mean root modulus.
    const double lead = std::abs(c.back());
    double radius = std::pow(std::max(std::abs(c.front()), 1e-300) / lead, 1.0 / n);
    if (!std::isfinite(radius) || radius == 0.0) radius = 1.0;
    std::vector<std::complex<double>> z(n);
    for (int k = 0; k < n; ++k)
        z[k] = std::polar(radius, 2.0 * std::numbers::pi * k / n + 0.4);

    double max_corr = 0.0;
    int it = 0;
    for (; it < max_iterations; ++it) {
        max_corr = 0.0;
        for (int i = 0; i < n; ++i) {
            auto [p, dp] = value_and_derivative(c, z[i]);
            if (p == 0.0) continue;
            const std::complex<double> ratio = p / dp;
            std::complex<double> repulsion{0.0, 0.0};
            for (int j = 0; j < n; ++j)
                if (j != i) repulsion += 1.0 / (z[i] - z[j]);
            const std::complex<double> w = ratio / (1.0 - ratio * repulsion);
            z[i] -= w;
            max_corr = std::max(max_corr, std::abs(w) / std::max(1.0, std::abs(z[i])));
        }
        if (max_corr <= tolerance) break;
    }
    if (it == max_iterations && max_corr > 1e3 * tolerance) {
        std::ostringstream msg;
        msg << "polynomial roots: Aberth iteration did not converge after " << it
            << " iterations (last relative correction " << max_corr << ")";
        throw NumericError(msg.str());
    }
    // Newton polish.
    for (auto& root : z) {
        for (int k = 0; k < 3; ++k) {
            auto [p, dp] = value_and_derivative(c, root);
            if (dp == 0.0) break;
            root -= p / dp;
        }
    }
    result.roots = std::move(z);
    result.iterations = it + 1;
    result.max_correction = max_corr;
    return result;
}

} // namespace lrvlab::poly
