#include "oracles.hpp"

#include "lrvlab/error.hpp"
#include "lrvlab/estimators.hpp"

#include <doctest.h>

#include <cmath>

using namespace lrvlab;

namespace {

EstimatorConfig make_config(DifferenceSequence seq, Kernel k, int ell, int h, int p = 0) {
    EstimatorConfig c;
    c.seq = std::move(seq);
    c.kernel = std::move(k);
    c.ell = ell;
    c.h = h;
    c.p = p;
    return c;
}

DifferenceSequence seq_of_order(int m) { return m == 0 ? DifferenceSequence::zeroth() : optimal_sequence(m); }

} // namespace

TEST_CASE("difference statistics") {
    const TimeSeries x(std::vector<double>{1, 2, 3, 4});
    const auto d = difference_statistics(x, binomial_sequence(1), 1);
    REQUIRE(d.size() == 3);
    for (double v : d) CHECK(std::abs(std::abs(v) - 1.0 / std::sqrt(2.0)) < 1e-15);
    const TimeSeries c(std::vector<double>(20, 3.5));
    for (double v : difference_statistics(c, optimal_sequence(3), 2)) CHECK(std::abs(v) < 1e-14);
    CHECK_THROWS_AS(difference_statistics(x, optimal_sequence(3), 2), InsufficientDataError);
}

TEST_CASE("gamma hat divides by n and matches a double loop") {
    const auto raw = oracle::normal_series(20, 3);
    const TimeSeries x(raw);
    const auto seq = optimal_sequence(2);
    const auto d = difference_statistics(x, seq, 1);
    for (long k = -5; k <= 5; ++k) {
        double acc = 0.0;
        for (int i = 2 + static_cast<int>(std::abs(k)) + 1; i <= 20; ++i) {
            double di = 0.0, dj = 0.0;
            for (int j = 0; j <= 2; ++j) {
                di += seq.coefficients()[j] * raw[i - j - 1];
                dj += seq.coefficients()[j] * raw[i - std::abs(k) - j - 1];
            }
            acc += di * dj;
        }
        CHECK(std::abs(gamma_hat_d(d, 1, k, 20)[0] - acc / 20.0) < 1e-13);
    }
    CHECK_THROWS_AS(gamma_hat_d(d, 1, 18, 20), DomainError);
}

TEST_CASE("kernel estimator equals the quadratic form") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = trial % 4;
        const int ell = 4 + trial % 7;
        const int lam = 1 + trial % 3;
        const int h = lam * ell;
        const int n = std::min(128, m * h + ell + 20 + static_cast<int>(rng() % 60));
        const int p = trial % 5 == 0 ? 2 : 0;
        const auto raw = oracle::normal_series(n, 100 + trial);
        const auto seq = seq_of_order(m);
        const auto k = Kernel::parzen_poly(2);
        const auto cfg = make_config(seq, k, ell, h, p);
        const double got = lrv(TimeSeries(raw), cfg).value;
        const std::vector<double> d(seq.coefficients().begin(), seq.coefficients().end());
        const double want = oracle::quadratic_form(raw, d, h, ell, p, k);
        CHECK(std::abs(got - want) < 1e-10);
    }
}

TEST_CASE("shift invariance and scale equivariance") {
    const auto raw = oracle::normal_series(300, 8);
    for (int m = 0; m <= 3; ++m) {
        const auto cfg = make_config(seq_of_order(m), Kernel::bartlett(), 7, 14);
        const double base = lrv(TimeSeries(raw), cfg).value;
        auto shifted = raw;
        for (double& v : shifted) v += 1234.5;
        auto scaled = raw;
        for (double& v : scaled) v *= -3.0;
        CHECK(std::abs(lrv(TimeSeries(shifted), cfg).value - base) <= 1e-10 * std::abs(base));
        CHECK(std::abs(lrv(TimeSeries(scaled), cfg).value - 9.0 * base) <= 1e-10 * std::abs(9.0 * base));
    }
}

TEST_CASE("constant series and configuration errors") {
    const TimeSeries c(std::vector<double>(100, -2.0));
    CHECK(std::abs(lrv(c, make_config(optimal_sequence(3), Kernel::parzen_poly(2), 6, 12)).value) < 1e-20);
    auto cfg = make_config(DifferenceSequence::zeroth(), Kernel::bartlett(), 5, 1);
    cfg.center_differences = false;
    CHECK_THROWS_AS(lrv(c, cfg), ConfigError);
    CHECK_THROWS_AS(lrv(c, make_config(optimal_sequence(3), Kernel::bartlett(), 20, 40)), InsufficientDataError);
}

TEST_CASE("centered variant subtracts the difference mean") {
    const auto raw = oracle::normal_series(80, 21);
    auto cfg = make_config(optimal_sequence(1), Kernel::bartlett(), 5, 10);
    cfg.center_differences = true;
    const double got = lrv(TimeSeries(raw), cfg).value;
    const auto d = difference_statistics(TimeSeries(raw), cfg.seq, 10);
    double mean = 0.0;
    for (double v : d) mean += v;
    mean /= 80.0;
    double want = 0.0;
    for (int k = -4; k <= 4; ++k) {
        double acc = 0.0;
        for (std::size_t i = std::abs(k); i < d.size(); ++i) acc += (d[i] - mean) * (d[i - std::abs(k)] - mean);
        want += Kernel::bartlett()(k / 5.0) * acc / 80.0;
    }
    CHECK(std::abs(got - want) < 1e-12);
}

TEST_CASE("regime tags") {
    CHECK(classify_regime(0, 5, 1) == Regime::optimal);
    CHECK(classify_regime(3, 6, 3) == Regime::inconsistent);
    CHECK(classify_regime(3, 6, 6) == Regime::may_be_optimal);
    CHECK(classify_regime(3, 6, 12) == Regime::optimal);
    CHECK(classify_regime_limit(false, 0.0) == Regime::inconsistent);
    CHECK(classify_regime_limit(false, 0.5) == Regime::inconsistent);
    CHECK(classify_regime_limit(false, 1.0) == Regime::may_be_optimal);
    CHECK(classify_regime_limit(false, 2.0) == Regime::optimal);
    CHECK(classify_regime_limit(false, INFINITY) == Regime::suboptimal);
    CHECK(classify_regime_limit(true, 1.0) == Regime::suboptimal);
    CHECK(classify_regime_limit(true, 2.0) == Regime::suboptimal);
    CHECK(classify_regime_limit(true, 0.5) == Regime::inconsistent);
}

TEST_CASE("subsampling estimator matches overlapping batch means") {
    const auto raw = oracle::normal_series(100, 4);
    const int ell = 7;
    const auto cfg = make_config(DifferenceSequence::zeroth(), Kernel::bartlett(), ell, 1);
    const double got = lrv_subsampling(TimeSeries(raw), cfg, Overlap::full).value;
    double mean = 0.0;
    for (double v : raw) mean += v;
    mean /= 100.0;
    double acc = 0.0;
    for (int i = ell; i <= 100; ++i) {
        double block = 0.0;
        for (int j = i - ell + 1; j <= i; ++j) block += raw[j - 1] - mean;
        acc += block * block;
    }
    CHECK(std::abs(got - acc / (ell * (100.0 - ell + 1))) < 1e-12);
}

TEST_CASE("subsampling estimator matches its direct definition") {
    const auto raw = oracle::normal_series(90, 9);
    const auto seq = optimal_sequence(2);
    const auto cfg = make_config(seq, Kernel::parzen_poly(2), 5, 10);
    const auto d = difference_statistics(TimeSeries(raw), seq, 10);  // row r is time 21 + r
    for (auto overlap : {Overlap::full, Overlap::none}) {
        std::vector<int> ends;
        if (overlap == Overlap::full)
            for (int i = 25; i <= 90; ++i) ends.push_back(i);
        else
            for (int i = 26; i <= 90; i += 26) ends.push_back(i);
        double acc = 0.0;
        for (int i : ends)
            for (int t = i - 4; t <= i; ++t)
                for (int u = i - 4; u <= i; ++u) {
                    const int lag = std::abs(t - u);
                    acc += Kernel::parzen_poly(2)(lag / 5.0) / (5 - lag) * d[t - 21] * d[u - 21];
                }
        CHECK(std::abs(lrv_subsampling(TimeSeries(raw), cfg, overlap).value - acc / ends.size()) < 1e-12);
    }
    auto bad = cfg;
    bad.p = 1;
    CHECK_THROWS_AS(lrv_subsampling(TimeSeries(raw), bad, Overlap::full), ConfigError);
}

TEST_CASE("autocovariance identity is exact") {
    const TimeSeries x(oracle::normal_series(50, 12));
    for (long k = -49; k <= 49; ++k) {
        const auto [lhs, rhs] = acvf_identity_check(x, k);
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
    CHECK_THROWS_AS(acvf_identity_check(x, 50), DomainError);
}

TEST_CASE("multivariate estimator") {
    const auto a = oracle::normal_series(200, 31);
    const auto b = oracle::normal_series(200, 32);
    std::vector<double> same, mixed, opposite;
    for (int i = 0; i < 200; ++i) {
        same.insert(same.end(), {a[i], a[i]});
        mixed.insert(mixed.end(), {a[i], a[i] + b[i]});
        opposite.insert(opposite.end(), {a[i], -a[i]});
    }
    const auto cfg = make_config(optimal_sequence(3), Kernel::parzen_poly(2), 6, 12);
    const double uni = lrv(TimeSeries(a), cfg).value;
    const auto r = lrv_multivariate(TimeSeries(same, 2), cfg);
    for (double v : r.matrix) CHECK(std::abs(v - uni) < 1e-12);
    const auto mr = lrv_multivariate(TimeSeries(mixed, 2), cfg);
    CHECK(std::abs(mr.matrix[1] - mr.matrix[2]) < 1e-12);
    CHECK(std::abs(mr.matrix[0] - uni) < 1e-12);
    std::vector<double> sum(200);
    for (int i = 0; i < 200; ++i) sum[i] = a[i] + b[i];
    CHECK(std::abs(mr.matrix[3] - lrv(TimeSeries(sum), cfg).value) < 1e-12);
    CHECK(long_run_correlation(TimeSeries(same, 2), cfg) == doctest::Approx(1.0));
    CHECK(long_run_correlation(TimeSeries(opposite, 2), cfg) == doctest::Approx(-1.0));
    auto raw_cfg = cfg;
    raw_cfg.symmetrize = false;
    const auto raw = lrv_multivariate(TimeSeries(mixed, 2), raw_cfg);
    CHECK(std::abs(0.5 * (raw.matrix[1] + raw.matrix[2]) - mr.matrix[1]) < 1e-12);
    CHECK_THROWS_AS(lrv_multivariate(TimeSeries(a), cfg), DomainError);
}
