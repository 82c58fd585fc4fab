#include "oracles.hpp"

#include "lrvlab/error.hpp"
#include "lrvlab/selection.hpp"
#include "lrvlab/simlab.hpp"

#include <doctest.h>

#include <cmath>

using namespace lrvlab;

TEST_CASE("optimal bandwidth formula") {
    const auto k = Kernel::parzen_poly(2);
    const double l = optimal_bandwidth(1.0, k, 7.0 / 6.0, 512, 2);
    CHECK(std::abs(l - std::pow(2.0 * 512.0 / (2.0 * (8.0 / 15.0) * (7.0 / 6.0)), 0.2)) < 1e-12);
    CHECK(l == doctest::Approx(3.829).epsilon(1e-3));
    CHECK(optimal_bandwidth(1.0, k, 3, 1024, 2) / optimal_bandwidth(1.0, k, 3, 512, 2) ==
          doctest::Approx(std::pow(2.0, 0.2)).epsilon(1e-12));
    CHECK(optimal_bandwidth(1.0, k, 1.5, 512, 2) < optimal_bandwidth(1.0, k, 1.2, 512, 2));
    CHECK_THROWS_AS(optimal_bandwidth(0.0, k, 3, 512, 2), NumericError);
    CHECK_THROWS_AS(optimal_bandwidth(1.0, Kernel::truncated(), 3, 512, 2), ConfigError);
    CHECK_THROWS_AS(optimal_bandwidth(1.0, k, 3, 512, 1), ConfigError);
}

TEST_CASE("tolerant ceiling and pilot bandwidths") {
    CHECK(tolerant_ceil(4.0000000000000009) == 4);
    CHECK(tolerant_ceil(4.01) == 5);
    CHECK(tolerant_ceil(-0.5) == 0);
    const TimeSeries x(oracle::normal_series(512, 1));
    const auto p = pilot_estimates(x, PlugInConfig{});
    // 2 * 512^{1/9} = 4 exactly; 2 * 512^{1/5} = 6.96
    CHECK(p.ell_vq == 4);
    CHECK(p.ell_v == 7);
    const auto c = pilot_estimates(TimeSeries(std::vector<double>(512, 2.0)), PlugInConfig{});
    CHECK(c.v_sharp == 0.0);
    CHECK(c.vq_sharp == 0.0);
}

TEST_CASE("mse constant") {
    const double m3 = asymptotic_mse_constant(Kernel::bartlett(), 3, 1, 1.0);
    CHECK(std::abs(m3 - std::cbrt(49.0 / 3.0)) < 1e-10);
    CHECK(std::cbrt(48.0) / m3 == doctest::Approx(1.43).epsilon(0.005));
    CHECK(std::abs(std::cbrt(48.0) / m3 - std::pow(12.0 / 7.0, 2.0 / 3.0)) < 1e-12);
    CHECK(std::abs(std::cbrt(1323.0 / 16.0) / m3 - std::pow(1.5, 4.0 / 3.0)) < 1e-12);
    for (const auto& k : {Kernel::bartlett(), Kernel::parzen_poly(2)}) {
        const int q = *k.q();
        double prev = 1e300;
        for (int m = 1; m <= 6; ++m) {
            const double v = asymptotic_mse_constant(k, m, q, 1.0);
            CHECK(v < prev);
            prev = v;
        }
    }
    const auto p2 = Kernel::parzen_poly(2);
    auto ratio = [&](int a, int b) { return asymptotic_mse_constant(p2, a, 2, 1.0) / asymptotic_mse_constant(p2, b, 2, 1.0) - 1.0; };
    CHECK(std::abs(100.0 * ratio(2, 1) + 13.6) < 0.2);
    CHECK(std::abs(100.0 * ratio(3, 2) + 5.4) < 0.2);
    CHECK(std::abs(100.0 * ratio(4, 3) + 2.9) < 0.2);
}

TEST_CASE("plug-in estimator basics") {
    const TimeSeries x(oracle::normal_series(400, 7));
    const auto r = suggested_estimator(x);
    CHECK(r.ell >= 2);
    CHECK(r.lrv.config.h == 2 * r.ell);
    CHECK(r.lrv.config.m() == 3);
    CHECK(r.rcp.has_value());
    CHECK(r.lrv.regime == Regime::optimal);
    CHECK_THROWS_AS(suggested_estimator(TimeSeries(oracle::normal_series(49, 1))), InsufficientDataError);
    PlugInConfig bad;
    bad.kernel = Kernel::truncated();
    CHECK_THROWS_AS(suggested_estimator(x, bad), ConfigError);
    PlugInConfig mismatch;
    mismatch.q = 3;
    CHECK_THROWS_AS(suggested_estimator(x, mismatch), ConfigError);
    const auto c = suggested_estimator(TimeSeries(std::vector<double>(100, 1.0)));
    CHECK(c.fallback);
    CHECK(c.lrv.value == 0.0);
    CHECK(c.ell == tolerant_ceil(1.5 * std::pow(100.0, 0.2)));
}

TEST_CASE("plug-in estimator shift invariance and scale equivariance") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto noise = NoiseModel::ar({0.5, 0.2});
        auto mean = MeanFunction::parse("exp_three_jumps", 2.0);
        const auto x = generate(noise, mean, 300, seed);
        const auto base = suggested_estimator(x);
        std::vector<double> sh(x.data().begin(), x.data().end()), s2 = sh, s3 = sh;
        for (auto& v : sh) v += 17.25;
        for (auto& v : s2) v *= 2.0;
        for (auto& v : s3) v *= 3.7;
        const auto rs = suggested_estimator(TimeSeries(sh));
        CHECK(rs.ell == base.ell);
        CHECK(std::abs(rs.lrv.value - base.lrv.value) <= 1e-9 * std::abs(base.lrv.value));
        const auto r2 = suggested_estimator(TimeSeries(s2));
        CHECK(r2.ell_hat == base.ell_hat);
        CHECK(r2.lrv.value == 4.0 * base.lrv.value);
        const auto r3 = suggested_estimator(TimeSeries(s3));
        CHECK(r3.ell == base.ell);
        CHECK(std::abs(r3.lrv.value - 3.7 * 3.7 * base.lrv.value) <= 1e-9 * std::abs(base.lrv.value) * 13.69);
    }
}

TEST_CASE("presets") {
    const TimeSeries x(oracle::normal_series(300, 9));
    for (const auto& name : preset_names()) CHECK(std::isfinite(estimate_by_preset(name, x)));
    CHECK(preset_config("classical").m == 0);
    CHECK(!preset_config("classical").apply_rcp);
    CHECK(preset_config("proposal-m2").m == 2);
    CHECK_THROWS_AS(preset_config("nope"), ConfigError);
}
