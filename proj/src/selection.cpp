#include "lrvlab/selection.hpp"

#include "lrvlab/error.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace lrvlab {

namespace {

DifferenceSequence plugin_sequence(int m) {
    if (m < 0) throw ConfigError("difference order m must be non-negative");
    return m == 0 ? DifferenceSequence::zeroth() : optimal_sequence(m);
}

} // namespace

long tolerant_ceil(double x) {
    return static_cast<long>(std::ceil(x - 1e-9 * std::max(1.0, std::abs(x))));
}

int resolve_q(const Kernel& kernel, std::optional<int> requested) {
    const auto q = kernel.q();
    if (!q || !kernel.B())
        throw ConfigError("kernel '" + kernel.name() + "' has no characteristic exponent q; the plug-in bandwidth needs q and B");
    if (requested && *requested != *q) {
        std::ostringstream msg;
        msg << "requested q = " << *requested << " but kernel '" << kernel.name() << "' has q = " << *q;
        throw ConfigError(msg.str());
    }
    return *q;
}

double optimal_bandwidth(double vq_over_v, const Kernel& kernel, double delta_m, std::size_t n, int q) {
    resolve_q(kernel, q);
    if (n < 10) throw InsufficientDataError("optimal bandwidth needs n >= 10");
    if (!std::isfinite(vq_over_v)) throw NumericError("v_q / v is not finite");
    if (vq_over_v == 0.0) throw NumericError("v_q / v = 0: degenerate spectrum, the plug-in bandwidth is undefined");
    const double B = *kernel.B();
    const double num = q * vq_over_v * vq_over_v * B * B * static_cast<double>(n);
    return std::pow(num / (2.0 * kernel.A() * delta_m), 1.0 / (1.0 + 2.0 * q));
}

double optimal_bandwidth(double vq_over_v, const Kernel& kernel, int m, std::size_t n, int q) {
    return optimal_bandwidth(vq_over_v, kernel, plugin_sequence(m).delta_m(), n, q);
}

double asymptotic_mse_constant(const Kernel& kernel, int m, int q, double eta_q) {
    resolve_q(kernel, q);
    const double B = *kernel.B();
    const double dm = plugin_sequence(m).delta_m();
    const double inner = B * B * std::pow(2.0 * kernel.A() * dm / q, 2.0 * q) * eta_q * eta_q;
    return (1.0 + 2.0 * q) * std::pow(inner, 1.0 / (1.0 + 2.0 * q));
}

PilotEstimates pilot_estimates(const TimeSeries& x, const PlugInConfig& cfg) {
    const int q = resolve_q(cfg.kernel, cfg.q);
    const auto seq = plugin_sequence(cfg.m);
    const double n = static_cast<double>(x.size());
    PilotEstimates out;
    out.ell_vq = static_cast<int>(tolerant_ceil(2.0 * std::pow(n, 1.0 / (5.0 + 2.0 * q))));
    out.ell_v = static_cast<int>(tolerant_ceil(2.0 * std::pow(n, 0.2)));
    for (int ell : {out.ell_v, out.ell_vq}) {
        const long need = static_cast<long>(cfg.m) * 2 * ell + ell;
        if (static_cast<long>(x.size()) <= need) {
            std::ostringstream msg;
            msg << "pilot estimates need n > " << need << ", got n = " << x.size();
            throw InsufficientDataError(msg.str());
        }
    }
    EstimatorConfig c;
    c.seq = seq;
    c.kernel = Kernel::parzen_poly(2);
    c.ell = out.ell_vq;
    c.h = 2 * out.ell_vq;
    c.p = q;
    out.vq_sharp = lrv(x, c).value;
    c.ell = out.ell_v;
    c.h = 2 * out.ell_v;
    c.p = 0;
    const auto vr = lrv(x, c);
    out.v_sharp = vr.value;
    out.gamma0_d = vr.gamma_d.empty() ? 0.0 : vr.gamma_d[0];
    return out;
}

SuggestedResult suggested_estimator(const TimeSeries& x, const PlugInConfig& cfg) {
    const int q = resolve_q(cfg.kernel, cfg.q);
    const auto seq = plugin_sequence(cfg.m);
    if (x.dims() != 1) throw DomainError("the plug-in estimator works on univariate series");
    const std::size_t n = x.size();
    if (n < 50) {
        std::ostringstream msg;
        msg << "the plug-in estimator needs n >= 50, got n = " << n;
        throw InsufficientDataError(msg.str());
    }
    SuggestedResult res;
    TimeSeries work = x;
    if (cfg.apply_rcp) {
        auto centered = rough_center(x, cfg.rcp);
        work = std::move(centered.series);
        res.rcp = std::move(centered.report);
    }
    res.pilots = pilot_estimates(work, cfg);
    const double nd = static_cast<double>(n);
    const double ratio = res.pilots.vq_sharp / res.pilots.v_sharp;
    const bool degenerate = !(res.pilots.v_sharp > 1e-10 * res.pilots.gamma0_d) || !(res.pilots.v_sharp > 0.0) ||
                            !std::isfinite(ratio) || ratio * ratio > nd || ratio == 0.0;
    long ell = 0;
    if (degenerate) {
        res.fallback = true;
        res.ell_hat = std::numeric_limits<double>::quiet_NaN();
        const double expo = cfg.fallback_exponent.value_or(1.0 / (1.0 + 2.0 * q));
        ell = tolerant_ceil(cfg.fallback_scale * std::pow(nd, expo));
    } else {
        res.ell_hat = optimal_bandwidth(ratio, cfg.kernel, seq.delta_m(), n, q);
        ell = tolerant_ceil(res.ell_hat);
    }
    const long upper = cfg.m == 0 ? static_cast<long>((n - 1) / 2)
                                  : static_cast<long>((n - 1) / static_cast<std::size_t>(2 * cfg.m + 2));
    const long clamped = std::clamp<long>(ell, 2, std::max<long>(2, upper));
    res.clamped = clamped != ell;
    res.ell = static_cast<int>(clamped);

    EstimatorConfig c;
    c.seq = seq;
    c.kernel = cfg.kernel;
    c.ell = res.ell;
    c.h = 2 * res.ell;
    res.lrv = lrv(work, c);
    return res;
}

} // namespace lrvlab

namespace lrvlab {

std::vector<std::string> preset_names() {
    return {"paper-default", "proposal-m1", "proposal-m2", "proposal-m3", "proposal-m4", "classical", "wz-ss"};
}

PlugInConfig preset_config(std::string_view name) {
    PlugInConfig cfg;
    if (name == "paper-default" || name == "proposal-m3") return cfg;
    if (name.starts_with("proposal-m") && name.size() == 11 && name[10] >= '1' && name[10] <= '9') {
        cfg.m = name[10] - '0';
        return cfg;
    }
    if (name == "classical") {
        cfg.m = 0;
        cfg.apply_rcp = false;
        return cfg;
    }
    throw ConfigError("unknown plug-in preset '" + std::string(name) + "'");
}

EstimatorConfig wz_ss_config(std::size_t n) {
    EstimatorConfig c;
    c.seq = binomial_sequence(1);
    c.kernel = Kernel::bartlett();
    c.ell = static_cast<int>(tolerant_ceil(std::cbrt(static_cast<double>(n))));
    c.h = c.ell;
    return c;
}

double estimate_by_preset(std::string_view name, const TimeSeries& x) {
    if (name == "wz-ss") return lrv_subsampling(x, wz_ss_config(x.size()), Overlap::none).value;
    return suggested_estimator(x, preset_config(name)).lrv.value;
}

} // namespace lrvlab
