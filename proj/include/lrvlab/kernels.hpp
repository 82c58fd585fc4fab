#ifndef LRVLAB_KERNELS_HPP
#define LRVLAB_KERNELS_HPP

#include "lrvlab/diffseq.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lrvlab {

enum class KernelKind {
    bartlett,
    parzen_poly,
    tukey_hanning,
    parzen_classic,
    modified_poly,
    truncated,
    trapezoidal,
    lugsail,
};

/// Compactly supported lag window: K(0) = 1, K even, K(t) = 0 for |t| >= 1.
///
/// Besides pointwise evaluation a kernel carries its near-origin exponent q
/// and constant B ((K(t) - 1)/|t|^q -> B), its near-boundary pair q', B'
/// ((K(1) - K(1 - t))/t^{q'} -> B'), and the integrals A, A_p and kappa.
/// A constant is absent when the kernel has no such expansion.
class Kernel {
public:
    static Kernel bartlett();
    /// (1 - |t|^q)^+.
    static Kernel parzen_poly(int q);
    static Kernel tukey_hanning();
    static Kernel parzen_classic();
    /// Piecewise polynomial with matching flatness (q' = q) at the origin and the boundary.
    static Kernel modified_poly(int q);
    static Kernel truncated();
    /// Flat on |t| <= flat, linear taper to zero at |t| = 1; flat in (0, 1).
    static Kernel trapezoidal(double flat);
    /// {K0(t) - c K0(r t)} / (1 - c) with r >= 1 and c in [0, 1).
    static Kernel lugsail(const Kernel& base, double r, double c);

    /// Parses names such as "bartlett", "parzen_poly:q=2", "trapezoidal:c=0.5"
    /// or "lugsail:base=bartlett,r=3,c=0.5". Throws ConfigError on bad input.
    static Kernel parse(std::string_view spec);

    KernelKind kind() const noexcept { return kind_; }
    /// Canonical name; parse(name()) reproduces the kernel.
    std::string name() const;

    double operator()(double t) const noexcept;

    std::optional<int> q() const;
    std::optional<double> B() const;
    std::optional<int> q_prime() const;
    std::optional<double> B_prime() const;

    /// A = int_0^1 K^2.
    double A() const { return A_p(0); }
    /// A_p = int_0^1 t^{2p} K^2(t) dt.
    double A_p(int p) const;
    /// kappa = int_{-1}^1 K.
    double kappa() const;

    /// Points in (0, 1) where K is not smooth; used to split quadrature.
    std::vector<double> breakpoints() const;

private:
    Kernel(KernelKind kind, int order, double r, double c, std::shared_ptr<const Kernel> base);

    KernelKind kind_;
    int order_ = 0;
    double r_ = 0.0;
    double c_ = 0.0;
    std::shared_ptr<const Kernel> base_;
};

struct KernelConstants {
    double A = 0.0;
    double A_p = 0.0;
    double kappa = 0.0;
};

KernelConstants constants(const Kernel& kernel, int p = 0);

/// Differencing kernel sum_s delta_{|s|} K(t + lambda s), s ranging over
/// ceil(-(1+t)/lambda)..floor((1-t)/lambda).
double k_diff(const Kernel& kernel, const DifferenceSequence& seq, double lambda, double t);

/// K_diff at the lattice point t = k/ell with lambda = h/ell; the summation
/// limits are resolved in integer arithmetic.
double k_diff_lattice(const Kernel& kernel, const DifferenceSequence& seq, int ell, int h, long k);

} // namespace lrvlab

#endif
