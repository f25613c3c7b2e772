"""
Test functions, weights and the symplectic prediction.

Fourier convention: phi_hat(u) = int phi(x) exp(-2 pi i x u) dx.  Under it
the transform of sin(2 pi x)/(2 pi x) is (1/2) 1_{[-1,1]}, so

    int phi(x) (1 - sin(2 pi x)/(2 pi x)) dx = int phi - (1/2) int_{-1}^{1} phi_hat.
"""

from dataclasses import dataclass, field
import math
from typing import Callable

import numpy as np
from scipy import integrate

QUAD_EPSABS = 1e-10
QUAD_LIMIT = 1 << 12


def adaptive_quad(f, a, b, epsabs=QUAD_EPSABS, epsrel=0.0, points=None):
    """Adaptive Gauss-Kronrod integration of a real function on [a, b]."""
    val, _ = integrate.quad(f, a, b, epsabs=epsabs, epsrel=epsrel, limit=QUAD_LIMIT,
                            points=points)
    return val


@dataclass(frozen=True, eq=False)
class TestFunctionPair:
    """An even test function phi with compactly supported transform phi_hat.

    Attributes:
        name: Family label, e.g. "fejer"
        sigma: phi_hat vanishes for |u| >= sigma
        phi, phi_hat: Vectorised evaluators
        integral_phi: int phi = phi_hat(0)
        integral_phi_hat_full: int phi_hat over the real line
        integral_phi_hat_unit: int_{-1}^{1} phi_hat
    """
    __test__ = False  # keep pytest from collecting this class

    name: str
    sigma: float
    phi: Callable = field(repr=False)
    phi_hat: Callable = field(repr=False)
    integral_phi: float
    integral_phi_hat_full: float
    integral_phi_hat_unit: float


def fejer_pair(sigma: float) -> TestFunctionPair:
    """phi_hat(u) = (1 - |u|/sigma)_+,  phi(x) = sigma sinc^2(sigma x)."""
    sigma = float(sigma)
    if not 0.0 < sigma < 2.0:
        raise ValueError(f"Fejer sigma must lie in (0, 2), got {sigma}")

    def phi(x):
        return sigma * np.sinc(sigma * np.asarray(x, dtype=float)) ** 2

    def phi_hat(u):
        return np.maximum(0.0, 1.0 - np.abs(np.asarray(u, dtype=float)) / sigma)

    unit = sigma if sigma <= 1.0 else 2.0 - 1.0 / sigma
    return TestFunctionPair("fejer", sigma, phi, phi_hat, 1.0, sigma, unit)


PAIRS = {"fejer": fejer_pair}


def make_pair(kind: str, sigma: float) -> TestFunctionPair:
    try:
        return PAIRS[kind](sigma)
    except KeyError:
        raise ValueError(f"unknown test function {kind!r}; known: {sorted(PAIRS)}") from None


@dataclass(frozen=True, eq=False)
class SmoothCompactFunction:
    """A smooth function supported on [a, b] with 0 < a < b."""
    a: float
    b: float
    evaluate: Callable = field(repr=False)
    integral: float

    def __call__(self, t):
        return self.evaluate(t)


def bump_weight(a: float, b: float) -> SmoothCompactFunction:
    """exp(-1/((t - a)(b - t))) scaled to 1 at the midpoint, zero off (a, b)."""
    a = float(a)
    b = float(b)
    if not 0.0 < a < b:
        raise ValueError(f"need 0 < a < b, got a={a}, b={b}")
    peak = 4.0 / (b - a) ** 2

    def w(t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape)
        inside = (t > a) & (t < b)
        ti = t[inside]
        out[inside] = np.exp(peak - 1.0 / ((ti - a) * (b - ti)))
        return out if out.ndim else float(out)

    total = adaptive_quad(w, a, b)
    return SmoothCompactFunction(a, b, w, total)


def rmt_prediction(pair: TestFunctionPair) -> float:
    """int phi(x) W_USp(x) dx with W_USp(x) = 1 - sin(2 pi x)/(2 pi x)."""
    return pair.integral_phi - 0.5 * pair.integral_phi_hat_unit


def usp_kernel(x):
    x = np.asarray(x, dtype=float)
    return 1.0 - np.sinc(2.0 * x)
