import math

import numpy as np
import pytest

import lrvlab


def test_optimal_sequence_delta_profile():
    s = lrvlab.optimal_sequence(3)
    assert s.order == 3
    assert abs(s.coefficients.sum()) < 1e-12
    assert np.allclose(s.deltas[1:], -1.0 / 6.0, atol=1e-8)
    assert s.delta_m == pytest.approx(1.0 + 1.0 / 6.0, abs=1e-8)


def test_kernel_and_differencing_kernel():
    k = lrvlab.Kernel("parzen_poly:q=2")
    assert k.q == 2
    assert k(0.5) == pytest.approx(0.75)
    assert np.allclose(k(np.array([0.0, 1.0])), [1.0, 0.0])
    s = lrvlab.optimal_sequence(2)
    for t in np.linspace(-1, 1, 41):
        assert lrvlab.k_diff(k, s, 2.0, t) == pytest.approx(k(t), abs=1e-12)


def test_lrv_fixed_bandwidth_shift_and_scale():
    x = lrvlab.simulate(400, 1, noise="ar", coeffs=[0.5])
    r = lrvlab.lrv(x, ell=6, m=2)
    assert r["h"] == 12
    assert r["regime"] == "optimal"
    assert lrvlab.lrv(x + 100.0, ell=6, m=2)["value"] == pytest.approx(r["value"], rel=1e-10)
    assert lrvlab.lrv(3.0 * x, ell=6, m=2)["value"] == pytest.approx(9.0 * r["value"], rel=1e-10)


def test_multivariate_matrix():
    a = lrvlab.simulate(300, 2)
    b = lrvlab.simulate(300, 3)
    r = lrvlab.lrv(np.column_stack([a, a + b]), ell=5)
    m = r["matrix"]
    assert m.shape == (2, 2)
    assert m[0, 1] == pytest.approx(m[1, 0], abs=1e-12)
    assert m[0, 0] == pytest.approx(lrvlab.lrv(a, ell=5)["value"], abs=1e-12)


def test_plug_in_estimator_and_presets():
    x = lrvlab.simulate(2000, 4)
    r = lrvlab.suggested_estimator(x)
    assert 0.7 < r["lrv"] < 1.3
    assert r["h"] == 2 * r["ell"]
    assert r["rcp"]["b"] == 12
    assert "paper-default" in lrvlab.presets()
    assert lrvlab.estimate(x) == r["lrv"]


def test_rough_center_removes_a_step():
    x = lrvlab.simulate(300, 5, mean="h1a", xi=8.0)
    y, report = lrvlab.rough_center(x)
    assert report["N"] >= 1
    assert abs(report["jumps"][0]["time"] - 61) <= 2
    assert y.shape == x.shape


def test_tests_and_bands():
    x = lrvlab.simulate(200, 6, mean="h1a", xi=3.0)
    ks = lrvlab.ks_test(x, 1.0)
    assert ks["critical_value"] == pytest.approx(1.358, abs=1e-3)
    assert ks["reject"]
    wz = lrvlab.wz_test(x, 1.0, reps=300, seed=1)
    assert wz == lrvlab.wz_test(x, 1.0, reps=300, seed=1)
    band = lrvlab.scb(lrvlab.simulate(200, 7), reps=200, seed=2)
    assert len(band["grid"]) == 201
    assert band["half_width"] == math.sqrt(band["v_hat"]) * band["quantile"]
    assert len(lrvlab.local_linear_trend(x, 0.1)) == 200


def test_oracles_and_constants():
    assert lrvlab.lrv_oracle("ar", coeffs=[0.5, 0.2]) == pytest.approx(1.0 / 0.09)
    m3 = lrvlab.asymptotic_mse_constant(lrvlab.Kernel("bartlett"), 3, 1)
    assert m3 == pytest.approx((49.0 / 3.0) ** (1.0 / 3.0), abs=1e-10)


def test_errors_map_to_python_exceptions():
    with pytest.raises(lrvlab.ConfigError):
        lrvlab.Kernel("nope")
    with pytest.raises(lrvlab.InsufficientDataError):
        lrvlab.suggested_estimator(np.zeros(10))
    with pytest.raises(lrvlab.Error):
        lrvlab.lrv(np.zeros((3, 3, 3)), ell=2)
