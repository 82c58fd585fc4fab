#include "oracles.hpp"

#include "lrvlab/error.hpp"
#include "lrvlab/rcp.hpp"

#include <doctest.h>

#include <cmath>

using namespace lrvlab;

TEST_CASE("batch length and quartiles") {
    CHECK(batch_length(8) == 2);
    CHECK(batch_length(26) == 2);
    CHECK(batch_length(27) == 3);
    CHECK(batch_length(1000) == 10);
    CHECK(batch_length(999) == 9);
    CHECK(batch_length(1000000) == 100);
    CHECK(quantile_type7({1, 2, 3, 4}, 0.25) == doctest::Approx(1.75));
    CHECK(quantile_type7({1, 2, 3, 4}, 0.75) == doctest::Approx(3.25));
    CHECK(quantile_type7({5}, 0.3) == 5.0);
}

TEST_CASE("constant series passes through unchanged") {
    const std::vector<double> c(150, 0.3);
    const auto out = rough_center(TimeSeries(c));
    CHECK(out.report.N == 0);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(out.series(i) == c[i]);
    for (const auto& s : out.report.slopes) CHECK(s.slope == 0.0);
}

TEST_CASE("noiseless step is found once and removed") {
    std::vector<double> x(200, 0.0);
    for (std::size_t i = 100; i < 200; ++i) x[i] = 10.0;
    const auto out = remove_jumps(TimeSeries(x));
    REQUIRE(out.report.N == 1);
    CHECK(out.report.detected_jumps[0].time == 101);
    CHECK(out.report.detected_jumps[0].raw_jump == 10.0);
    for (std::size_t i = 0; i < 200; ++i) CHECK(out.series(i) == 0.0);
}

TEST_CASE("jump subtraction is winsorized at M") {
    auto x = oracle::normal_series(20000, 17);
    for (std::size_t i = 10000; i < x.size(); ++i) x[i] += 1e6;
    const auto out = remove_jumps(TimeSeries(x));
    REQUIRE(out.report.N >= 1);
    const auto& first = out.report.detected_jumps[0];
    CHECK(first.time == 10001);
    CHECK(std::abs(first.raw_jump) > out.report.M);
    CHECK(std::abs(first.winsorized_jump) == doctest::Approx(out.report.M));
    for (const auto& j : out.report.detected_jumps) CHECK(std::abs(j.winsorized_jump) <= out.report.M);
    // a residual step of roughly 1e6 - M remains
    CHECK(out.series(10000) - out.series(9999) > 1e6 - out.report.M - 10.0);
}

TEST_CASE("detected times are distinct and at most N'") {
    auto x = oracle::normal_series(400, 3);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += 5.0 * static_cast<double>((i * 7) / x.size());
    RcpOptions opt;
    opt.max_jumps = 4;
    const auto out = remove_jumps(TimeSeries(x), opt);
    CHECK(out.report.N <= 4);
    for (std::size_t a = 0; a < out.report.detected_jumps.size(); ++a)
        for (std::size_t b = a + 1; b < out.report.detected_jumps.size(); ++b)
            CHECK(out.report.detected_jumps[a].time != out.report.detected_jumps[b].time);
}

TEST_CASE("slope removal maps affine series to constants for any partition") {
    std::vector<double> x(97);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 2.5 - 0.37 * static_cast<double>(i + 1);
    for (const std::vector<long>& cuts : {std::vector<long>{}, std::vector<long>{40}, std::vector<long>{3, 5, 50, 96},
                                          std::vector<long>{60, 10, 33}}) {
        const auto out = remove_slopes(TimeSeries(x), cuts);
        for (std::size_t i = 1; i < x.size(); ++i) CHECK(std::abs(out.series(i) - out.series(0)) < 1e-10);
    }
}

TEST_CASE("piecewise linear series with a seam becomes piecewise constant with matched levels") {
    const long t1 = 61;
    std::vector<double> x(120);
    for (long i = 1; i <= 120; ++i)
        x[static_cast<std::size_t>(i - 1)] = i < t1 ? 0.5 * (i - 1) : 0.5 * (t1 - 1) + (-0.2) * (i - t1);
    const auto out = remove_slopes(TimeSeries(x), {t1});
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(out.series(i)) < 1e-10);
    REQUIRE(out.report.slopes.size() == 2);
    CHECK(out.report.slopes[0].slope == doctest::Approx(0.5));
    CHECK(out.report.slopes[1].slope == doctest::Approx(-0.2));
}

TEST_CASE("length-one segments get zero slope and no shift") {
    std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    const auto out = remove_slopes(TimeSeries(x), {10});
    CHECK(out.report.slopes.back().length == 1);
    CHECK(out.report.slopes.back().slope == 0.0);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(remove_jumps(TimeSeries(std::vector<double>(7, 1.0))), InsufficientDataError);
    CHECK_THROWS_AS(remove_slopes(TimeSeries(std::vector<double>(10, 1.0)), {11}), DomainError);
    CHECK_THROWS_AS(rough_center(TimeSeries(std::vector<double>(20, 1.0), 2)), DomainError);
}

TEST_CASE("white noise without jumps rarely triggers the fences") {
    int total = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto out = remove_jumps(TimeSeries(oracle::normal_series(400, seed)));
        total += static_cast<int>(out.report.N);
    }
    CHECK(total <= 10);
}

TEST_CASE("steps in noise are located at the first shifted index") {
    int exact = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        auto x = oracle::normal_series(300, seed);
        for (std::size_t i = 150; i < x.size(); ++i) x[i] += 6.0;
        const auto out = remove_jumps(TimeSeries(x));
        REQUIRE(out.report.N >= 1);
        if (out.report.detected_jumps[0].time == 151) ++exact;
    }
    CHECK(exact >= 45);
}
