import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from quadtwist.testfn import (adaptive_quad, bump_weight, fejer_pair, make_pair, rmt_prediction,
                              usp_kernel)


def gauss_legendre_on_periods(f, length, periods, order=20):
    """int_0^{length * periods} f by a fixed Gauss rule on each period."""
    x, w = np.polynomial.legendre.leggauss(order)
    starts = np.arange(periods) * length
    nodes = (starts[:, None] + 0.5 * length * (x + 1)[None, :]).ravel()
    return float(np.sum(f(nodes).reshape(periods, order) * w) * 0.5 * length)


def test_fejer_examples():
    pair = fejer_pair(1.0)
    assert pair.phi(0.0) == 1.0
    assert (pair.integral_phi, pair.integral_phi_hat_full) == (1.0, 1.0)
    assert fejer_pair(1.2).integral_phi_hat_unit == pytest.approx(2 - 1 / 1.2, abs=1e-15)
    for s in (0.3, 1.0, 1.7):
        assert fejer_pair(s).phi_hat(s / 2) == pytest.approx(0.5, abs=1e-15)
        assert fejer_pair(s).phi_hat(s) == 0.0


def test_fejer_rejects_sigma():
    for s in (0.0, -1.0, 2.0, 3.0):
        with pytest.raises(ValueError):
            fejer_pair(s)
    with pytest.raises(ValueError):
        make_pair("gauss", 1.0)


@pytest.mark.parametrize("sigma", [0.5, 1.0, 1.2])
def test_fourier_transform_by_quadrature(sigma):
    pair = fejer_pair(sigma)
    R = 400.0 / sigma  # 400 zeros of phi on each side
    for u in np.arange(0.0, sigma + 1e-12, 0.1):
        # even phi: transform is 2 int_0^inf phi cos(2 pi x u)
        val = 2 * gauss_legendre_on_periods(lambda x: pair.phi(x) * np.cos(2 * np.pi * x * u),
                                            1.0 / sigma, 400)
        # |tail| <= 2 int_R^inf 1/(pi^2 sigma x^2) = 2/(pi^2 sigma R)
        assert val == pytest.approx(float(pair.phi_hat(u)), abs=1e-6 + 2 / (math.pi ** 2 * sigma * R))


@pytest.mark.parametrize("sigma", [0.5, 0.9, 1.0, 1.2, 1.9])
def test_integral_phi(sigma):
    pair = fejer_pair(sigma)
    n = 10 ** 4
    R = n / sigma
    body = 2 * gauss_legendre_on_periods(pair.phi, 1.0 / sigma, n)
    # sin^2 averages 1/2 beyond R, and sin(2 pi sigma R) = 0
    tail = 2 * (1.0 / (2 * math.pi ** 2 * sigma * R))
    assert body + tail == pytest.approx(float(pair.phi_hat(0.0)), abs=1e-8)


@given(st.floats(-50, 50), st.floats(0.05, 1.95))
def test_evenness(x, sigma):
    pair = fejer_pair(sigma)
    assert pair.phi(x) == pair.phi(-x)
    assert pair.phi_hat(x) == pair.phi_hat(-x)


def test_bump_weight():
    w = bump_weight(1.0, 2.0)
    assert w(1.0) == 0.0 and w(2.0) == 0.0 and w(0.5) == 0.0 and w(2.5) == 0.0
    assert w(1.5) == pytest.approx(1.0, abs=1e-15)
    assert np.all(w(np.linspace(0, 3, 301)) >= 0)
    x, wt = np.polynomial.legendre.leggauss(400)
    t = 1.5 + 0.5 * x
    assert w.integral == pytest.approx(0.5 * float(np.sum(wt * w(t))), abs=1e-9)
    with pytest.raises(ValueError):
        bump_weight(2.0, 1.0)
    with pytest.raises(ValueError):
        bump_weight(0.0, 1.0)


def test_adaptive_quad_polynomial():
    assert adaptive_quad(lambda t: t ** 3, 0.0, 2.0) == pytest.approx(4.0, abs=1e-12)


@pytest.mark.parametrize("sigma,expected", [(0.5, 0.75), (0.8, 0.6), (1.0, 0.5), (1.2, 1 - (2 - 1 / 1.2) / 2)])
def test_rmt_prediction_closed_forms(sigma, expected):
    assert abs(rmt_prediction(fejer_pair(sigma)) - expected) <= 1e-12


@pytest.mark.parametrize("sigma", [0.2, 0.5, 0.8, 1.0])
def test_prediction_uses_full_integral_inside_unit(sigma):
    pair = fejer_pair(sigma)
    assert abs(pair.integral_phi - 0.5 * pair.integral_phi_hat_full - rmt_prediction(pair)) <= 1e-12


def test_prediction_matches_kernel_integral():
    pair = fejer_pair(1.2)
    n = 4000
    body = 2 * gauss_legendre_on_periods(lambda x: pair.phi(x) * usp_kernel(x), 0.5 / 1.2, 2 * n)
    # beyond R the kernel is 1 + O(1/x) and phi ~ 1/(2 pi^2 sigma x^2) on average
    R = n / 1.2
    assert body + 1 / (math.pi ** 2 * 1.2 * R) == pytest.approx(rmt_prediction(pair), abs=1e-6)
