"""
Family averages over the quadratic twists chi_{8d}, d odd and square-free.

All prime sums are reorganised per prime,

    sum_d w(d/X) sum_p c_p chi_{8d}(p) = sum_p c_p (2/p) T_p,
    T_p = sum_d w(d/X) (d/p),

so the expensive part is the matrix of Legendre symbols (d/p), handled by
the compiled kernel in ``_kernels``.  Each T_p is accumulated sequentially
over ascending d, and the outer p-sum is reduced with math.fsum, so the
result is the same for any number of threads.
"""

from dataclasses import asdict, dataclass, field
import csv
import io
import json
import math
import time

import numba
import numpy as np

from ._kernels import legendre_weighted_sums
from .arith import ArithTables, jacobi_table, mz_rz_range, two_symbol
from .coeffs import CoefficientProvider
from .errors import EmptyFamilyError, RangeError
from .explicit import make_context
from .poisson import MellinContour, odd_restricted_dual
from .testfn import SmoothCompactFunction, TestFunctionPair, rmt_prediction

MODES = ("full", "simplified")
REPORT_KEYS = ("X", "family", "M", "sigma", "mode", "Z", "W_X", "d_count", "empirical_D",
               "prediction", "diff", "prime_limit", "wall_time_s")
# bytes of per-d Jacobi tables we are willing to hold for primes beyond max(d)
JACOBI_TABLE_BUDGET = 1 << 28


def check_admissible(M: int, sigma: float) -> None:
    """Reject sigma >= 2/M (sigma >= 2 for GL(1))."""
    bound = 2.0 if M == 1 else 2.0 / M
    if not sigma < bound:
        raise ValueError(f"sigma = {sigma} is not admissible for degree {M} (need sigma < {bound:g})")


@dataclass(frozen=True, eq=False)
class FamilySpec:
    """One family run: scale X, weight w, representation, test function, mode and Z.

    Z defaults to log^3 X.  Admissibility requires sigma < 2/M, relaxed to
    sigma < 2 for GL(1).
    """
    X: float
    weight: SmoothCompactFunction
    provider: CoefficientProvider
    pair: TestFunctionPair
    mode: str = "simplified"
    Z: float = None

    def __post_init__(self):
        if self.X < 3:
            raise ValueError(f"X must be at least 3, got {self.X}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        check_admissible(self.provider.degree, self.pair.sigma)
        if self.Z is None:
            object.__setattr__(self, "Z", math.log(self.X) ** 3)
        elif self.Z <= 0:
            raise ValueError(f"Z must be positive, got {self.Z}")

    @property
    def d_range(self):
        """Smallest and largest integer d with a < d/X < b."""
        lo = math.floor(self.weight.a * self.X) + 1
        hi = math.ceil(self.weight.b * self.X) - 1
        return lo, hi

    @property
    def prime_cutoff(self) -> float:
        return self.X ** (self.provider.degree * self.pair.sigma)

    def required_limit(self) -> int:
        """Sieve size needed for both the d range and the prime sums."""
        return max(self.d_range[1], int(math.ceil(self.prime_cutoff)))


@dataclass
class DensityReport:
    X: float
    family: str
    M: int
    sigma: float
    mode: str
    Z: float
    W_X: float
    d_count: int
    empirical_D: float
    prediction: float
    diff: float
    prime_limit: int
    wall_time_s: float
    S: float = field(default=math.nan, repr=False)
    s_M: float = field(default=math.nan, repr=False)
    s_R: float = field(default=math.nan, repr=False)

    def as_dict(self) -> dict:
        d = asdict(self)
        return {k: d[k] for k in REPORT_KEYS}

    def to_json(self) -> str:
        return json.dumps(self.as_dict())

    def to_csv_row(self) -> str:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerow([self.as_dict()[k] for k in REPORT_KEYS])
        return buf.getvalue()

    @staticmethod
    def csv_header() -> str:
        return ",".join(REPORT_KEYS) + "\n"


def _odd_family(spec: FamilySpec, tables: ArithTables):
    lo, hi = spec.d_range
    if hi > tables.limit:
        raise RangeError(f"family needs d up to {hi} but the sieve stops at {tables.limit}",
                         required=hi)
    lo += 1 - lo % 2
    ds = np.arange(lo, hi + 1, 2, dtype=np.int64)
    w = np.asarray(spec.weight(ds / spec.X), dtype=float)
    return ds, w


def total_weight(spec: FamilySpec, tables: ArithTables) -> float:
    """W(X): sum of w(d/X) over odd square-free d."""
    ds, w = _odd_family(spec, tables)
    sqf = tables.moebius[ds] != 0
    return math.fsum(w[sqf].tolist())


def set_threads(threads) -> None:
    if threads is not None:
        numba.set_num_threads(max(1, min(int(threads), numba.config.NUMBA_NUM_THREADS)))


def character_sums(ds: np.ndarray, rows: np.ndarray, primes: np.ndarray,
                   tables: ArithTables = None) -> np.ndarray:
    """T[r, j] = sum_i rows[r, i] * (ds[i] / primes[j]) for ascending odd ds and odd primes."""
    ds = np.ascontiguousarray(ds, dtype=np.int64)
    rows = np.ascontiguousarray(np.atleast_2d(rows), dtype=float)
    primes = np.ascontiguousarray(primes, dtype=np.int64)
    offsets = np.zeros(ds.size, dtype=np.int64)
    tabs = np.zeros(1, dtype=np.int8)
    use_tabs = False
    dmax = int(ds[-1]) if ds.size else 0
    if primes.size and int(primes[-1]) > dmax and int(ds.sum()) <= JACOBI_TABLE_BUDGET:
        offsets[1:] = np.cumsum(ds)[:-1]
        tabs = np.concatenate([jacobi_table(int(d), tables) for d in ds])
        use_tabs = True
    return legendre_weighted_sums(ds, rows, primes, tabs, offsets, use_tabs)


@dataclass
class FamilySums:
    """Raw (un-normalised) family prime sums.

    S is sum_d mu^2(d) w(d/X) sum_p c_p chi_{8d}(p); s_M and s_R replace mu^2
    by M_Z and R_Z.  ``powers`` is the analogous sum over p^k, k >= 2.
    """
    W: float
    d_count: int
    S: float
    s_M: float
    s_R: float
    powers: float = 0.0


def family_sums(spec: FamilySpec, tables: ArithTables, split: bool = False,
                powers: bool = False, threads=None) -> FamilySums:
    """Compute the weighted family sums behind ``density`` and ``s_split``.

    Args:
        split: always evaluate the M_Z and R_Z rows.  Otherwise they are only
            evaluated when R_Z is nonzero somewhere in range (when R_Z vanishes
            identically, s_M = S and s_R = 0 exactly).
        powers: also sum the prime-power terms (full mode).
    """
    set_threads(threads)
    ctx = make_context(spec.X, spec.provider, spec.pair, tables)
    ds, w = _odd_family(spec, tables)
    sqf = tables.moebius[ds] != 0
    w_sq = np.where(sqf, w, 0.0)
    d_count = int(np.count_nonzero(sqf & (w > 0)))
    W = math.fsum(w_sq.tolist())
    if d_count == 0 or W <= 0.0:
        raise EmptyFamilyError(f"no odd square-free d with {spec.weight.a} < d/X < {spec.weight.b} "
                               f"at X = {spec.X:g}")
    lo, hi = int(ds[0]), int(ds[-1])
    mz, rz = mz_rz_range(lo, hi, spec.Z, tables)
    mz, rz = mz[::2], rz[::2]
    need_split = split or bool(np.any(rz[w > 0]))
    rows = [w_sq]
    if need_split:
        rows += [w * mz, w * rz]
    primes = ctx.primes
    T = character_sums(ds, np.array(rows), primes, tables)
    c = ctx.prime_weights * two_symbol(primes)
    S = math.fsum((c * T[0]).tolist())
    if need_split:
        s_M = math.fsum((c * T[1]).tolist())
        s_R = math.fsum((c * T[2]).tolist())
    else:
        s_M, s_R = S, 0.0
    pw = 0.0
    if powers:
        pp, kk, wk = ctx.power_terms
        terms = []
        idx = np.searchsorted(primes, pp)
        for p, k, wt, j in zip(pp.tolist(), kk.tolist(), wk.tolist(), idx.tolist()):
            if k % 2:
                terms.append(wt * (1 if p % 8 in (1, 7) else -1) * T[0, j])
            else:
                # chi^2 = 1 away from p | d
                terms.append(wt * (W - math.fsum(w_sq[ds % p == 0].tolist())))
        pw = math.fsum(terms)
    return FamilySums(W=W, d_count=d_count, S=S, s_M=s_M, s_R=s_R, powers=pw)


def density(spec: FamilySpec, tables: ArithTables, threads=None) -> DensityReport:
    """Empirical one-level density of the family, with the symplectic prediction.

    simplified: int phi - (1/2) int phi_hat - (2/(M log X)) S / W(X)
    full:       int phi - (2/(M log X)) (S + prime powers) / W(X)
    """
    t0 = time.perf_counter()
    if tables.limit < spec.required_limit():
        raise RangeError(f"sieve limit {tables.limit} below the required {spec.required_limit()}",
                         required=spec.required_limit())
    full = spec.mode == "full"
    sums = family_sums(spec, tables, powers=full, threads=threads)
    pair = spec.pair
    norm = 2.0 / (spec.provider.degree * math.log(spec.X))
    if full:
        D = pair.integral_phi - norm * (sums.S + sums.powers) / sums.W
    else:
        D = pair.integral_phi - 0.5 * pair.integral_phi_hat_full - norm * sums.S / sums.W
    pred = rmt_prediction(pair)
    return DensityReport(
        X=float(spec.X), family=spec.provider.label, M=spec.provider.degree, sigma=pair.sigma,
        mode=spec.mode, Z=float(spec.Z), W_X=sums.W, d_count=sums.d_count, empirical_D=D,
        prediction=pred, diff=D - pred, prime_limit=int(math.ceil(spec.prime_cutoff)),
        wall_time_s=time.perf_counter() - t0, S=sums.S, s_M=sums.s_M, s_R=sums.s_R)


def s_split(spec: FamilySpec, tables: ArithTables, threads=None):
    """(S_M, S_R): the family sum with mu^2(d) replaced by M_Z(d) and R_Z(d)."""
    sums = family_sums(spec, tables, split=True, threads=threads)
    return sums.s_M, sums.s_R


def _small_prime_coeffs(spec: FamilySpec, tables: ArithTables, p_max: int):
    if p_max > 1000:
        raise ValueError(f"p_max = {p_max} too large for the verification path (limit 1000)")
    p = tables.primes_upto(p_max)
    p = p[p != 2]
    L = spec.provider.degree * math.log(spec.X)
    lp = np.log(p)
    c = spec.provider(p, 1) * lp / np.sqrt(p) * spec.pair.phi_hat(lp / L)
    return p, c * two_symbol(p)


def s_m_terms_direct(spec: FamilySpec, tables: ArithTables, p_max: int):
    """Per-prime terms c_p (2/p) sum_d M_Z(d) w(d/X) (d/p) for odd p <= p_max, by direct summation."""
    p, c = _small_prime_coeffs(spec, tables, p_max)
    if p.size == 0:
        return p, np.zeros(0)
    ds, w = _odd_family(spec, tables)
    mz, _ = mz_rz_range(int(ds[0]), int(ds[-1]), spec.Z, tables)
    T = character_sums(ds, (w * mz[::2])[None, :], p, tables)
    return p, c * T[0]


def s_m_terms_dual(spec: FamilySpec, tables: ArithTables, p_max: int,
                   contour: MellinContour = MellinContour()):
    """Per-prime S_M terms with each inner d-sum evaluated on the dual (Poisson) side.

    Writing d = l^2 e, the M_Z-weighted sum becomes
    sum_{l <= Z odd} mu(l) sum_{e odd} (l^2 e / p) w(e l^2 / X); only l with
    p not dividing l and l^2 < b X can contribute.
    """
    p, c = _small_prime_coeffs(spec, tables, p_max)
    lmax = min(int(spec.Z), math.isqrt(int(spec.weight.b * spec.X)))
    out = np.zeros(p.size)
    for j, q in enumerate(p.tolist()):
        inner = []
        for l in range(1, lmax + 1, 2):
            mu = int(tables.moebius[l])
            if mu == 0 or l % q == 0:
                continue
            inner.append(mu * odd_restricted_dual(q, spec.weight, spec.X, l, contour))
        out[j] = c[j] * math.fsum(inner)
    return p, out


def s_m_dual(spec: FamilySpec, tables: ArithTables, contour: MellinContour = MellinContour(),
             p_max: int = 100) -> float:
    """S_M restricted to odd primes p <= p_max, evaluated through Poisson summation."""
    _, terms = s_m_terms_dual(spec, tables, p_max, contour)
    return math.fsum(terms.tolist())
