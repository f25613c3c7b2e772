"""
Smoothed quadratic character sums through the functional equation.

For chi = (./q), q an odd prime, chi(-1) = (-1)^a,

    sum_n chi(n) W(n/X) = X/sqrt(q) * sum_{m>=1} chi(m) W~_a(mX/q),

    W~_b(x) = 1/(2 pi i) int_{(c)} MW(1-u) x^{-u} pi^{-(2u-1)/2}
              Gamma((u+b)/2) / Gamma((1-u+b)/2) du.

The contour integral is evaluated with the trapezoidal rule on a uniform grid
in Im u.  The integrand is analytic in a strip around the line, so the rule
converges geometrically in the step; the truncation height is what limits
accuracy, because MW decays only like exp(-C sqrt|t|) for bump weights.
"""

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np
from scipy.special import loggamma

from .arith import legendre_table
from .errors import AccuracyError
from .testfn import SmoothCompactFunction, adaptive_quad

TAIL_TOL = 1e-9
_BLOCK = 256
_NOISE = 1e-14
_MAX_TERMS = 1 << 20


@dataclass(frozen=True)
class MellinContour:
    """Vertical line Re u = c, sampled on [-height, height] with spacing step."""
    c: float = 1.25
    height: float = 1000.0
    step: float = 0.05

    def __post_init__(self):
        if not self.c > 1.0:
            raise ValueError(f"contour abscissa must exceed 1, got {self.c}")
        if self.step <= 0 or self.height <= 0:
            raise ValueError("height and step must be positive")
        ratio = self.height / self.step
        if abs(ratio - round(ratio)) > 1e-9 * ratio or round(ratio) < 100:
            raise ValueError("height/step must be an integer >= 100")

    @property
    def nodes(self) -> int:
        return int(round(self.height / self.step))


def is_odd_prime(q: int) -> bool:
    if q < 3 or q % 2 == 0:
        return False
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class QuadraticCharacter:
    """The Legendre character (./q) for an odd prime q."""
    q: int

    def __post_init__(self):
        if not is_odd_prime(self.q):
            raise ValueError(f"{self.q} is not an odd prime")

    @property
    def parity(self) -> int:
        """a in {0, 1} with chi(-1) = (-1)^a."""
        return 0 if self.q % 4 == 1 else 1

    def __call__(self, n):
        return legendre_table(self.q)[np.asarray(n, dtype=np.int64) % self.q]


def mellin(W: SmoothCompactFunction, s: complex) -> complex:
    """int_0^inf W(t) t^{s-1} dt by adaptive quadrature (absolute tol 1e-12)."""
    s = complex(s)
    re = adaptive_quad(lambda t: W(t) * (t ** (s - 1)).real, W.a, W.b, epsabs=1e-12)
    im = adaptive_quad(lambda t: W(t) * (t ** (s - 1)).imag, W.a, W.b, epsabs=1e-12)
    return complex(re, im)


def _gl_nodes(W: SmoothCompactFunction, height: float):
    # enough points to resolve t^{-i height} across [a, b] with margin
    n = 200 + int(1.2 * height * math.log(W.b / W.a))
    x, wt = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (W.b - W.a)
    t = W.a + half * (x + 1.0)
    return np.log(t), wt * half * W(t)


def mellin_grid(W: SmoothCompactFunction, s) -> np.ndarray:
    """MW(s) for an array of s by fixed high-order Gauss-Legendre quadrature.

    Sized for |Im s| up to max |Im s| in the request.
    """
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    logt, wts = _gl_nodes(W, max(float(np.abs(s.imag).max()), 1.0))
    out = np.empty(s.size, dtype=complex)
    for i in range(0, s.size, 1024):
        blk = s[i:i + 1024]
        out[i:i + 1024] = np.exp(np.outer(blk - 1.0, logt)) @ wts
    return out


def gamma_factor(u, b: int):
    """pi^{-(2u-1)/2} Gamma((u+b)/2) / Gamma((1-u+b)/2), via log-Gamma."""
    u = np.asarray(u, dtype=complex)
    z = (1 - u + b) / 2
    # 1/Gamma vanishes at the poles z = 0, -1, ...; loggamma returns inf there
    pole = (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))
    with np.errstate(invalid="ignore", over="ignore"):
        out = np.exp(-(u - 0.5) * math.log(math.pi) + loggamma((u + b) / 2) - loggamma(z))
    return np.where(pole, 0.0, out)


def mellin_line_fft(W: SmoothCompactFunction, c: float, step: float, n: int) -> np.ndarray:
    """MW(1 - c - i k step) for k = -n..n by one FFT in v = log t.

    MW(1 - u) = int W(e^v) e^{(1-c) v} e^{-i t v} dv.  The integrand is smooth
    with every derivative vanishing at the ends of its support, so the
    trapezoidal rule in v converges faster than any power of the spacing.
    """
    size = 1 << max(17, int(math.ceil(math.log2(8 * n + 8))))
    dv = 2.0 * math.pi / (step * size)
    v0 = math.log(W.a)
    count = int(math.ceil((math.log(W.b) - v0) / dv)) + 1
    if count >= size:
        raise AccuracyError("FFT grid too coarse for the weight support")
    v = v0 + dv * np.arange(count)
    f = np.zeros(size)
    f[:count] = W(np.exp(v)) * np.exp((1.0 - c) * v)
    spec = np.fft.fft(f) * dv
    k = np.arange(-n, n + 1)
    return spec[k % size] * np.exp(-1j * k * step * v0)


@lru_cache(maxsize=32)
def _kernel(W: SmoothCompactFunction, b: int, contour: MellinContour, full: bool = False):
    """Trapezoid nodes t and weighted integrand values g(t) on the contour.

    With full=False only t >= 0 is kept (the conjugate half is implied).
    """
    n = contour.nodes
    mw = mellin_line_fft(W, contour.c, contour.step, n)
    if not full:
        mw = mw[n:]
    k = np.arange(-n if full else 0, n + 1)
    t = k * contour.step
    u = contour.c + 1j * t
    g = mw * gamma_factor(u, b)
    wts = np.full(t.size, contour.step)
    wts[0] = wts[-1] = 0.5 * contour.step
    tail_len = max(n // 10, 1)
    tail = float(np.sum(np.abs(g[-tail_len:]))) * contour.step
    return t, g * wts, tail


@lru_cache(maxsize=32)
def _kernel_blocks(W, b, contour):
    """g on t >= 0 reshaped to (rows, cols) for the factored phase product."""
    t, g, _ = _kernel(W, b, contour)
    cols = int(math.ceil(math.sqrt(g.size)))
    rows = int(math.ceil(g.size / cols))
    padded = np.zeros(rows * cols, dtype=complex)
    padded[:g.size] = g
    return padded.reshape(rows, cols), rows, cols


def contour_tail(W, b, contour, x=1.0) -> float:
    """Estimated truncation error of w_tilde at x from the last decade of samples."""
    _, _, tail = _kernel(W, int(b), contour)
    xmin = float(np.min(np.atleast_1d(x)))
    return tail * xmin ** -contour.c / math.pi


def w_tilde(W: SmoothCompactFunction, b: int, x, contour: MellinContour = MellinContour()):
    """The dual kernel W~_b at x > 0 (scalar or array).

    Conjugate pairing reduces the line integral to (1/pi) Re of the t >= 0
    half.  Phases e^{-i k h L} are factored as e^{-i K cols h L} e^{-i j h L}
    (k = K cols + j), turning a block of evaluations into one matrix product.
    """
    b = int(b)
    if b not in (0, 1):
        raise ValueError("parity b must be 0 or 1")
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs <= 0):
        raise ValueError("w_tilde needs x > 0")
    est = contour_tail(W, b, contour, xs)
    if est > TAIL_TOL:
        raise AccuracyError(f"contour truncated at height {contour.height}: "
                            f"estimated tail {est:.2e} > {TAIL_TOL:.0e}", achieved=est)
    G, rows, cols = _kernel_blocks(W, b, contour)
    h = contour.step
    out = np.empty(xs.size)
    for i in range(0, xs.size, _BLOCK):
        L = np.log(xs[i:i + _BLOCK])
        inner = np.exp(-1j * h * np.outer(np.arange(cols), L))
        outer = np.exp(-1j * h * cols * np.outer(np.arange(rows), L))
        s = np.sum(outer * (G @ inner), axis=0)
        out[i:i + _BLOCK] = s.real * xs[i:i + _BLOCK] ** -contour.c
    out /= math.pi
    return out if np.ndim(x) else float(out[0])


def w_tilde_complex(W: SmoothCompactFunction, b: int, x: float,
                    contour: MellinContour = MellinContour()) -> complex:
    """W~_b(x) integrated over the whole line without conjugate pairing."""
    t, g, _ = _kernel(W, int(b), contour, full=True)
    u = contour.c + 1j * t
    return complex(np.sum(g * np.exp(-u * math.log(x)))) / (2 * math.pi)


def gauss_sum(q: int) -> complex:
    """tau(chi) = sum_{1 <= x <= q} (x/q) e(x/q)."""
    if not is_odd_prime(q) or q > 10 ** 6:
        raise ValueError(f"gauss_sum needs an odd prime q <= 1e6, got {q}")
    x = np.arange(1, q + 1)
    chi = legendre_table(q)[x % q].astype(float)
    ang = 2.0 * math.pi * x / q
    return complex(math.fsum((chi * np.cos(ang)).tolist()), math.fsum((chi * np.sin(ang)).tolist()))


def direct_sum(q: int, W: SmoothCompactFunction, X: float, odd_only: bool = False) -> float:
    """sum_n (n/q) W(n/X) over the finitely many n with n/X in supp W."""
    lo = max(1, int(math.floor(W.a * X)))
    hi = int(math.ceil(W.b * X))
    n = np.arange(lo, hi + 1)
    if odd_only:
        n = n[n % 2 == 1]
    vals = legendre_table(q)[n % q] * W(n / X)
    return math.fsum(np.atleast_1d(vals).tolist())


def dual_sum(q: int, W: SmoothCompactFunction, X: float,
             contour: MellinContour = MellinContour(), parity: int = None):
    """X/sqrt(q) sum_{m>=1} (m/q) W~_a(mX/q), truncated adaptively.

    Returns (value, number of m terms).  Terms are produced in blocks; the sum
    stops once the last three nonzero terms fall below 1e-12 of the largest
    (or below an absolute 1e-13) and a C x^{-4} envelope, fitted to the terms
    that stand above round-off, bounds the remaining tail by 1e-9.
    """
    chi = QuadraticCharacter(q)
    b = chi.parity if parity is None else parity
    scale = X / math.sqrt(q)
    terms = np.zeros(0)
    kernel = np.zeros(0)
    m0 = 1
    while True:
        m = np.arange(m0, m0 + _BLOCK)
        wt = w_tilde(W, b, m * X / q, contour)
        kernel = np.concatenate([kernel, wt])
        terms = np.concatenate([terms, chi(m) * wt * scale])
        m0 += _BLOCK
        nz = np.abs(terms[terms != 0])
        floor = max(1e-12 * float(nz.max(initial=0.0)), 1e-13)
        if nz.size >= 3 and np.all(nz[-3:] < floor):
            x = np.arange(1, terms.size + 1) * X / q
            real = (x >= 1.0) & (np.abs(kernel) > _NOISE)
            env = float(np.max(np.abs(kernel[real]) * x[real] ** 4, initial=0.0))
            M = terms.size
            tail = scale * env * (X / q) ** -4 * M ** -3 / 3.0
            if tail < TAIL_TOL:
                break
        if m0 > _MAX_TERMS:
            raise AccuracyError(f"dual sum not certified after {_MAX_TERMS} terms")
    return math.fsum(terms.tolist()), int(terms.size)


def poisson_check(q: int, W: SmoothCompactFunction, X: float,
                  contour: MellinContour = MellinContour()):
    """Both sides of the Poisson identity: (lhs, rhs, m terms used)."""
    QuadraticCharacter(q)
    lhs = direct_sum(q, W, X)
    rhs, m_terms = dual_sum(q, W, X, contour)
    return lhs, rhs, m_terms


def odd_restricted_direct(p: int, W: SmoothCompactFunction, X: float, alpha: int) -> float:
    """sum_{d odd} (d/p) W(d alpha^2 / X) by direct summation."""
    return direct_sum(p, W, X / alpha ** 2, odd_only=True)


def odd_restricted_dual(p: int, W: SmoothCompactFunction, X: float, alpha: int,
                        contour: MellinContour = MellinContour()) -> float:
    """sum_{d odd} (d/p) W(d alpha^2/X) as two dual sums.

    Removing even d = 2e gives  S(X/alpha^2) - (2/p) S(X/(2 alpha^2)),
    where S(Y) = sum_d (d/p) W(d/Y) is then dualised.
    """
    QuadraticCharacter(p)
    if alpha < 1 or math.gcd(alpha, 2 * p) != 1:
        raise ValueError(f"alpha = {alpha} must be positive and coprime to 2p = {2 * p}")
    two = 1 if p % 8 in (1, 7) else -1
    first, _ = dual_sum(p, W, X / alpha ** 2, contour)
    second, _ = dual_sum(p, W, X / (2 * alpha ** 2), contour)
    return first - two * second
