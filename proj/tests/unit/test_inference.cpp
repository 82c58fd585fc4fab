#include "oracles.hpp"

#include "lrvlab/error.hpp"
#include "lrvlab/inference.hpp"
#include "lrvlab/simlab.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace lrvlab;

TEST_CASE("Kolmogorov distribution") {
    CHECK(std::abs(kolmogorov_critical_value(0.05) - 1.358) < 5e-4);
    CHECK(std::abs(kolmogorov_critical_value(0.01) - 1.628) < 5e-4);
    CHECK(std::abs(kolmogorov_critical_value(0.10) - 1.224) < 5e-4);
    CHECK(kolmogorov_cdf(1.3581) == doctest::Approx(0.95).epsilon(1e-4));
    CHECK_THROWS_AS(kolmogorov_critical_value(0.0), DomainError);
}

TEST_CASE("KS statistic") {
    const TimeSeries c(std::vector<double>(100, 0.1));
    CHECK(ks_test(c, 1.0).statistic == 0.0);
    CHECK(!ks_test(c, 1.0).reject);
    const auto raw = oracle::normal_series(200, 5);
    const TimeSeries x(raw);
    const auto a = ks_test(x, 2.0);
    const auto b = ks_test(x, 8.0);
    CHECK(std::abs(a.statistic / b.statistic - 2.0) < 1e-12);
    CHECK(a.critical_value == doctest::Approx(1.358).epsilon(1e-3));
    // direct oracle
    double mean = 0.0;
    for (double v : raw) mean += v;
    mean /= 200.0;
    double s = 0.0, best = 0.0;
    for (double v : raw) best = std::max(best, std::abs(s += v - mean));
    CHECK(std::abs(a.statistic - best / std::sqrt(400.0)) < 1e-12);
    auto shifted = raw;
    for (auto& v : shifted) v += 3.0;
    CHECK(std::abs(ks_test(TimeSeries(shifted), 2.0).statistic - a.statistic) < 1e-12);
    auto scaled = raw;
    for (auto& v : scaled) v *= 3.0;
    CHECK(ks_test(TimeSeries(scaled), 18.0).reject == a.reject);
    CHECK(std::abs(ks_test(TimeSeries(scaled), 18.0).statistic - a.statistic) < 1e-12);
    CHECK_THROWS_AS(ks_test(x, 0.0), DomainError);
}

TEST_CASE("WZ statistic and calibration") {
    CHECK(wz_window(200, 0.6) == 25);
    const TimeSeries c(std::vector<double>(200, 0.7));
    WzOptions fast;
    fast.calibration_reps = 2000;
    CHECK(wz_test(c, 1.0, fast).statistic == 0.0);
    const auto raw = oracle::normal_series(200, 6);
    // direct oracle
    double best = 0.0;
    for (int i = 25; i <= 175; ++i) {
        double f = 0.0, b = 0.0;
        for (int j = i + 1; j <= i + 25; ++j) f += raw[j - 1];
        for (int j = i - 24; j <= i; ++j) b += raw[j - 1];
        best = std::max(best, std::abs(f - b));
    }
    const auto r = wz_test(TimeSeries(raw), 1.0, fast);
    CHECK(std::abs(r.statistic - best / 25.0) < 1e-12);
    CHECK(r.critical_value > 0.5);
    CHECK(r.critical_value < 5.0);
    CHECK(wz_critical_value(200, fast) == r.critical_value);
    auto stronger = fast;
    stronger.level = 0.01;
    CHECK(wz_critical_value(200, stronger) > r.critical_value);
    std::vector<double> shifted(raw);
    for (auto& v : shifted) v -= 11.0;
    CHECK(std::abs(wz_test(TimeSeries(shifted), 1.0, fast).statistic - r.statistic) < 1e-12);
    std::vector<double> jump(raw);
    for (std::size_t i = 120; i < jump.size(); ++i) jump[i] += 4.0;
    const auto jr = wz_test(TimeSeries(jump), 1.0, fast);
    CHECK(jr.reject);
    CHECK(std::abs(jr.location - 120) <= 10);
    auto bad = fast;
    bad.beta = 0.7;
    CHECK_THROWS_AS(wz_test(TimeSeries(raw), 1.0, bad), DomainError);
}

TEST_CASE("WZ calibration is independent of the worker count") {
    WzOptions a;
    a.calibration_reps = 1000;
    a.seed = 99;
    a.workers = 1;
    auto b = a;
    b.workers = 4;
    CHECK(wz_critical_value(150, a) == wz_critical_value(150, b));
}

TEST_CASE("trend estimator") {
    const TimeSeries c(std::vector<double>(200, 2.5));
    for (double v : local_linear_trend(c, 0.05)) CHECK(std::abs(v - 2.5) < 1e-10);
    std::vector<double> lin(400), cosv(400);
    for (int i = 1; i <= 400; ++i) {
        lin[i - 1] = i / 400.0;
        cosv[i - 1] = std::cos(2.0 * std::numbers::pi * i / 400.0);
    }
    const auto fl = local_linear_trend(TimeSeries(lin), 0.05);
    const auto fc = local_linear_trend(TimeSeries(cosv), 0.05);
    for (int i = 1; i <= 400; ++i) {
        const double t = i / 400.0;
        if (t < 0.2 || t > 0.8) continue;
        CHECK(std::abs(fl[i - 1] - t) < 1e-3);
        CHECK(std::abs(fc[i - 1] - cosv[i - 1]) < 0.01);
    }
    const auto a = oracle::normal_series(200, 1), b = oracle::normal_series(200, 2);
    std::vector<double> s(200);
    for (int i = 0; i < 200; ++i) s[i] = a[i] + b[i];
    const auto ta = local_linear_trend(TimeSeries(a), 0.07), tb = local_linear_trend(TimeSeries(b), 0.07),
               ts = local_linear_trend(TimeSeries(s), 0.07);
    for (int i = 0; i < 200; ++i) CHECK(std::abs(ts[i] - ta[i] - tb[i]) < 1e-10);
    CHECK_THROWS_AS(local_linear_trend(c, 0.6), DomainError);
}

TEST_CASE("SCB construction") {
    const auto x = generate(NoiseModel::ar({0.45}).normalized(), MeanFunction::parse("cosine"), 200, 3);
    ScbOptions o;
    o.reps = 200;
    o.b_star = 0.05;
    const auto band = scb(x, o);
    CHECK(band.grid.size() == 201);
    CHECK(band.half_width > 0.0);
    CHECK(band.half_width == std::sqrt(band.v_hat) * band.quantile);
    for (std::size_t j = 1; j < band.grid.size(); ++j) CHECK(band.grid[j] > band.grid[j - 1]);
    CHECK(band.grid.front() == doctest::Approx(band.bandwidth));
    CHECK(band.bandwidth <= 0.25);
    auto wide = o;
    wide.level = 0.99;
    CHECK(scb(x, wide).half_width > band.half_width);
    CHECK_THROWS_AS(scb(x, [] { ScbOptions bad; bad.reps = 10; return bad; }()), ConfigError);
}

TEST_CASE("SCB on a noiseless series stays valid") {
    const TimeSeries c(std::vector<double>(200, 1.0));
    ScbOptions o;
    o.reps = 200;
    const auto band = scb(c, o);
    CHECK(band.half_width > 0.0);
    CHECK(band.half_width < 1e-5);
    CHECK(band.bandwidth == doctest::Approx(2.0 * default_b_star(200)));
    for (double v : band.mu_hat) CHECK(std::abs(v - 1.0) <= band.half_width);
}
