#ifndef LRVLAB_POLYNOMIAL_HPP
#define LRVLAB_POLYNOMIAL_HPP

#include <complex>
#include <span>
#include <vector>

/// Small real-polynomial toolkit. Coefficients are stored lowest degree first.
namespace lrvlab::poly {

struct RootResult {
    std::vector<std::complex<double>> roots;
    int iterations = 0;
    double max_correction = 0.0;
};

std::complex<double> evaluate(std::span<const double> coeffs, std::complex<double> z);

std::vector<double> multiply(std::span<const double> a, std::span<const double> b);

/// Divides by the monic linear factor (z - root); the remainder is discarded.
std::vector<double> deflate(std::span<const double> coeffs, double root);

/// All complex roots by simultaneous Aberth-Ehrlich iteration.
/// Throws NumericError (with the iteration count and last correction) when
/// the iteration does not settle within `max_iterations`.
RootResult roots(std::span<const double> coeffs, int max_iterations = 500, double tolerance = 1e-14);

} // namespace lrvlab::poly

#endif
