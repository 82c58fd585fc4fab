#ifndef LRVLAB_SELECTION_HPP
#define LRVLAB_SELECTION_HPP

#include "lrvlab/estimators.hpp"
#include "lrvlab/rcp.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lrvlab {

struct PlugInConfig {
    int m = 3;
    Kernel kernel = Kernel::parzen_poly(2);
    /// Must equal the kernel's q when set.
    std::optional<int> q;
    bool apply_rcp = true;
    RcpOptions rcp;
    /// Fallback ell = ceil(fallback_scale * n^{fallback_exponent}); exponent defaults to 1/(1+2q).
    std::optional<double> fallback_exponent;
    double fallback_scale = 1.5;

    /// The recommended configuration: m = 3, (1 - t^2)^+, lambda = 2, RCP on.
    static PlugInConfig paper_default() { return {}; }
};

/// ceil() that forgives representation error: values within 1e-9 (relative)
/// above an integer round down to it.
long tolerant_ceil(double x);

/// ell* = {q (v_q/v)^2 B^2 n / (2 A Delta_m)}^{1/(1+2q)}, unrounded.
double optimal_bandwidth(double vq_over_v, const Kernel& kernel, double delta_m, std::size_t n, int q);
/// Same with Delta_m taken from the optimal sequence of order m.
double optimal_bandwidth(double vq_over_v, const Kernel& kernel, int m, std::size_t n, int q);

struct PilotEstimates {
    double v_sharp = 0.0;
    double vq_sharp = 0.0;
    int ell_v = 0;    // bandwidth of v_sharp, ceil(2 n^{1/5})
    int ell_vq = 0;   // bandwidth of vq_sharp, ceil(2 n^{1/(5+2q)})
    double gamma0_d = 0.0;  // gamma_0^D under the v_sharp configuration
};

/// Pilot estimates of v and v_q with (1 - t^2)^+, the optimal sequence of
/// order cfg.m, and h = 2 ell. `x` should already be rough-centered.
PilotEstimates pilot_estimates(const TimeSeries& x, const PlugInConfig& cfg);

struct SuggestedResult {
    LrvResult lrv;
    double ell_hat = 0.0;  // unrounded plug-in bandwidth (NaN when the fallback fired)
    int ell = 0;           // bandwidth actually used
    bool fallback = false;
    bool clamped = false;
    PilotEstimates pilots;
    std::optional<RcpReport> rcp;
};

/// Plug-in estimator: rough centering (optional), pilots, ell-hat*, then the
/// kernel estimator with ell = ceil(ell-hat*), h = 2 ell and the optimal sequence.
SuggestedResult suggested_estimator(const TimeSeries& x, const PlugInConfig& cfg = {});

/// M_(m) = (1+2q) {B^2 (2 A Delta_m / q)^{2q} eta^2}^{1/(1+2q)} with Delta_m of the optimal sequence.
double asymptotic_mse_constant(const Kernel& kernel, int m, int q, double eta_q);

/// Throws ConfigError if the kernel lacks (q, B) or disagrees with a requested q.
int resolve_q(const Kernel& kernel, std::optional<int> requested);

/// Named estimators used by the CLI and the experiments:
///   paper-default / proposal-m3   plug-in with m = 3 and rough centering
///   proposal-m<k>                 same with m = k
///   classical                     plug-in with m = 0 (global mean centering), no rough centering
///   wz-ss                         first-order differences, h = ell = ceil(n^{1/3}), Bartlett, non-overlapping batches
std::vector<std::string> preset_names();
/// Plug-in configuration of a named preset (all but wz-ss).
PlugInConfig preset_config(std::string_view name);
/// The wz-ss preset: binomial m = 1, ell = h = ceil(n^{1/3}), Bartlett, non-overlapping blocks.
EstimatorConfig wz_ss_config(std::size_t n);
/// Point estimate of v from a named preset.
double estimate_by_preset(std::string_view name, const TimeSeries& x);

} // namespace lrvlab

#endif
