#include "lrvlab/diffseq.hpp"
#include "lrvlab/error.hpp"
#include "lrvlab/estimators.hpp"
#include "lrvlab/inference.hpp"
#include "lrvlab/kernels.hpp"
#include "lrvlab/rcp.hpp"
#include "lrvlab/selection.hpp"
#include "lrvlab/simlab.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace pybind11::literals;
using namespace lrvlab;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

TimeSeries to_series(const Array& a) {
    if (a.ndim() == 1) return TimeSeries(std::vector<double>(a.data(), a.data() + a.shape(0)));
    if (a.ndim() == 2)
        return TimeSeries(std::vector<double>(a.data(), a.data() + a.size()), static_cast<std::size_t>(a.shape(1)));
    throw DomainError("expected a 1-d series or an (n, S) array");
}

Array to_array(const std::vector<double>& v) { return Array(static_cast<py::ssize_t>(v.size()), v.data()); }

Array to_array(const TimeSeries& x) {
    if (x.dims() == 1) return to_array(std::vector<double>(x.data().begin(), x.data().end()));
    Array out({static_cast<py::ssize_t>(x.size()), static_cast<py::ssize_t>(x.dims())});
    std::copy(x.data().begin(), x.data().end(), out.mutable_data());
    return out;
}

Array square(const std::vector<double>& m, std::size_t dims) {
    Array out({static_cast<py::ssize_t>(dims), static_cast<py::ssize_t>(dims)});
    std::copy(m.begin(), m.end(), out.mutable_data());
    return out;
}

DifferenceSequence sequence_of(const std::string& family, int m) {
    if (m == 0) return DifferenceSequence::zeroth();
    if (family == "optimal") return optimal_sequence(m);
    if (family == "binomial") return binomial_sequence(m);
    if (family == "local") return local_sequence(m);
    throw ConfigError("unknown sequence family '" + family + "' (optimal, binomial, local)");
}

NoiseModel noise_of(const std::string& kind, const std::vector<double>& coeffs, double sigma, double theta1,
                    double theta2, bool normalize) {
    NoiseModel n;
    if (kind == "iid") n = NoiseModel::iid(sigma);
    else if (kind == "ar") n = NoiseModel::ar(coeffs, sigma);
    else if (kind == "ma") n = NoiseModel::ma(coeffs, sigma);
    else if (kind == "tar") n = NoiseModel::tar(theta1, theta2);
    else throw ConfigError("unknown noise kind '" + kind + "' (iid, ar, ma, tar)");
    return normalize ? n.normalized() : n;
}

py::dict report_dict(const RcpReport& r) {
    py::list jumps, segments;
    for (const auto& j : r.detected_jumps)
        jumps.append(py::dict("time"_a = j.time, "raw_jump"_a = j.raw_jump, "winsorized_jump"_a = j.winsorized_jump));
    for (const auto& s : r.slopes)
        segments.append(py::dict("start"_a = s.start, "length"_a = s.length, "intercept"_a = s.intercept,
                                 "slope"_a = s.slope, "shift"_a = s.shift));
    return py::dict("b"_a = r.b, "M"_a = r.M, "N"_a = r.N, "jumps"_a = jumps, "segments"_a = segments,
                    "warnings"_a = r.warnings);
}

} // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Difference-based long-run variance estimation";

    auto error = py::register_exception<Error>(mod, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(mod, "DomainError", error.ptr());
    py::register_exception<InsufficientDataError>(mod, "InsufficientDataError", error.ptr());
    py::register_exception<ConfigError>(mod, "ConfigError", error.ptr());
    py::register_exception<NumericError>(mod, "NumericError", error.ptr());

    py::class_<DifferenceSequence>(mod, "DifferenceSequence")
        .def_property_readonly("order", &DifferenceSequence::order)
        .def_property_readonly("coefficients",
                               [](const DifferenceSequence& s) { return to_array({s.coefficients().begin(), s.coefficients().end()}); })
        .def_property_readonly("deltas",
                               [](const DifferenceSequence& s) { return to_array({s.deltas().begin(), s.deltas().end()}); })
        .def_property_readonly("delta_m", &DifferenceSequence::delta_m)
        .def("__repr__", [](const DifferenceSequence& s) { return "<DifferenceSequence m=" + std::to_string(s.order()) + ">"; });
    mod.def("optimal_sequence", &optimal_sequence, "m"_a);
    mod.def("binomial_sequence", &binomial_sequence, "m"_a);
    mod.def("local_sequence", &local_sequence, "m"_a);
    mod.def("normalize_sequence", [](const std::vector<double>& raw) { return normalize(raw); }, "raw"_a);

    py::class_<Kernel>(mod, "Kernel")
        .def(py::init([](const std::string& spec) { return Kernel::parse(spec); }), "spec"_a)
        .def_property_readonly("name", &Kernel::name)
        .def_property_readonly("q", &Kernel::q)
        .def_property_readonly("B", &Kernel::B)
        .def_property_readonly("A", &Kernel::A)
        .def("__call__", [](const Kernel& k, double t) { return k(t); }, "t"_a)
        .def("__call__", [](const Kernel& k, const Array& t) { return py::vectorize([&k](double v) { return k(v); })(t); },
             "t"_a)
        .def("__repr__", [](const Kernel& k) { return "<Kernel " + k.name() + ">"; });
    mod.def("k_diff", [](const Kernel& k, const DifferenceSequence& s, double lambda, double t) { return k_diff(k, s, lambda, t); },
            "kernel"_a, "sequence"_a, "lam"_a, "t"_a);

    mod.def(
        "lrv",
        [](const Array& x, int ell, int m, const std::string& kernel, std::optional<int> h, int p,
           const std::string& sequence, std::optional<bool> center_differences) {
            EstimatorConfig c;
            c.seq = sequence_of(sequence, m);
            c.kernel = Kernel::parse(kernel);
            c.ell = ell;
            c.h = h.value_or(2 * ell);
            c.p = p;
            c.center_differences = center_differences;
            const auto ts = to_series(x);
            const auto r = ts.dims() == 1 ? lrv(ts, c) : lrv_multivariate(ts, c);
            py::dict d("value"_a = r.value, "regime"_a = to_string(r.regime), "ell"_a = c.ell, "h"_a = c.h,
                       "m"_a = c.m(), "kernel"_a = c.kernel.name());
            if (r.dims > 1) d["matrix"] = square(r.matrix, r.dims);
            else d["gamma_d"] = to_array(r.gamma_d);
            return d;
        },
        "x"_a, "ell"_a, "m"_a = 3, "kernel"_a = "parzen_poly:q=2", "h"_a = py::none(), "p"_a = 0,
        "sequence"_a = "optimal", "center_differences"_a = py::none(),
        "Kernel estimator with a fixed bandwidth; h defaults to 2 ell. 2-d input returns the S x S matrix.");

    mod.def(
        "suggested_estimator",
        [](const Array& x, int m, const std::string& kernel, bool apply_rcp) {
            PlugInConfig c;
            c.m = m;
            c.kernel = Kernel::parse(kernel);
            c.apply_rcp = apply_rcp;
            const auto r = suggested_estimator(to_series(x), c);
            py::dict d("lrv"_a = r.lrv.value, "ell"_a = r.ell, "h"_a = r.lrv.config.h, "m"_a = m,
                       "ell_hat"_a = r.ell_hat, "fallback"_a = r.fallback, "clamped"_a = r.clamped,
                       "regime"_a = to_string(r.lrv.regime),
                       "pilots"_a = py::dict("v_sharp"_a = r.pilots.v_sharp, "vq_sharp"_a = r.pilots.vq_sharp,
                                             "ell_v"_a = r.pilots.ell_v, "ell_vq"_a = r.pilots.ell_vq));
            d["rcp"] = r.rcp ? py::object(report_dict(*r.rcp)) : py::none();
            return d;
        },
        "x"_a, "m"_a = 3, "kernel"_a = "parzen_poly:q=2", "apply_rcp"_a = true,
        "Plug-in estimator with rough centering and the MSE-optimal bandwidth.");

    mod.def("estimate", [](const Array& x, const std::string& preset) { return estimate_by_preset(preset, to_series(x)); },
            "x"_a, "preset"_a = "paper-default", "Point estimate from a named preset.");
    mod.def("presets", &preset_names);

    mod.def(
        "rough_center",
        [](const Array& x, int max_jumps, double cap_multiplier) {
            RcpOptions o;
            o.max_jumps = max_jumps;
            o.cap_multiplier = cap_multiplier;
            const auto r = rough_center(to_series(x), o);
            return py::make_tuple(to_array(r.series), report_dict(r.report));
        },
        "x"_a, "max_jumps"_a = 10, "cap_multiplier"_a = 100.0,
        "Removes obvious jumps and a continuous broken-line trend; returns (series, report).");

    mod.def("optimal_bandwidth",
            [](double ratio, const Kernel& k, int m, std::size_t n, int q) { return optimal_bandwidth(ratio, k, m, n, q); },
            "vq_over_v"_a, "kernel"_a, "m"_a, "n"_a, "q"_a);
    mod.def("asymptotic_mse_constant", &asymptotic_mse_constant, "kernel"_a, "m"_a, "q"_a, "eta"_a = 1.0);

    auto test_dict = [](const TestResult& r) {
        return py::dict("statistic"_a = r.statistic, "critical_value"_a = r.critical_value, "level"_a = r.level,
                        "reject"_a = r.reject, "lrv_used"_a = r.lrv_used, "location"_a = r.location);
    };
    mod.def(
        "ks_test", [test_dict](const Array& x, double v_hat, double level) { return test_dict(ks_test(to_series(x), v_hat, level)); },
        "x"_a, "v_hat"_a, "level"_a = 0.05);
    mod.def(
        "wz_test",
        [test_dict](const Array& x, double v_hat, double beta, double level, int reps, std::uint64_t seed) {
            WzOptions o;
            o.beta = beta;
            o.level = level;
            o.calibration_reps = reps;
            o.seed = seed;
            return test_dict(wz_test(to_series(x), v_hat, o));
        },
        "x"_a, "v_hat"_a, "beta"_a = 0.6, "level"_a = 0.05, "reps"_a = 10000, "seed"_a = 20070101);
    mod.def("kolmogorov_critical_value", &kolmogorov_critical_value, "level"_a = 0.05);

    mod.def("local_linear_trend", [](const Array& x, double b) { return to_array(local_linear_trend(to_series(x), b)); },
            "x"_a, "b"_a);
    mod.def(
        "scb",
        [](const Array& x, double level, std::optional<double> b_star, int reps, std::uint64_t seed, const std::string& preset) {
            ScbOptions o;
            o.level = level;
            o.b_star = b_star;
            o.reps = reps;
            o.seed = seed;
            o.estimator = preset;
            const auto band = scb(to_series(x), o);
            return py::dict("grid"_a = to_array(band.grid), "mu_hat"_a = to_array(band.mu_hat),
                            "half_width"_a = band.half_width, "level"_a = band.level, "bandwidth"_a = band.bandwidth,
                            "b_star"_a = band.b_star, "v_hat"_a = band.v_hat, "quantile"_a = band.quantile);
        },
        "x"_a, "level"_a = 0.95, "b_star"_a = py::none(), "reps"_a = 1000, "seed"_a = 20070102,
        "preset"_a = "paper-default");

    mod.def(
        "simulate",
        [](std::size_t n, std::uint64_t seed, const std::string& noise, const std::vector<double>& coeffs, double sigma,
           double theta1, double theta2, bool normalize, const std::string& mean, double xi) {
            const auto model = noise_of(noise, coeffs, sigma, theta1, theta2, normalize);
            return to_array(generate(model, MeanFunction::parse(mean, xi), n, seed));
        },
        "n"_a, "seed"_a, "noise"_a = "iid", "coeffs"_a = std::vector<double>{}, "sigma"_a = 1.0, "theta1"_a = 0.0,
        "theta2"_a = 0.0, "normalize"_a = false, "mean"_a = "zero", "xi"_a = 1.0,
        "X_i = mu(i/n) + Z_i for a noise model and a named mean function.");
    mod.def(
        "lrv_oracle",
        [](const std::string& noise, const std::vector<double>& coeffs, double sigma, double theta1, double theta2) {
            return lrv_oracle(noise_of(noise, coeffs, sigma, theta1, theta2, false));
        },
        "noise"_a = "iid", "coeffs"_a = std::vector<double>{}, "sigma"_a = 1.0, "theta1"_a = 0.0, "theta2"_a = 0.0);
}
