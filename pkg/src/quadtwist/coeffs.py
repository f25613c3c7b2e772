"""
Automorphic coefficient providers.

A provider exposes a_pi(p^k) = sum_j alpha_pi(p, j)^k for a fixed
self-contragredient pi.  Shipped instances:

- ``provider_gl1``        trivial character of GL(1)
- ``provider_delta``      the weight-12 cusp form Delta (GL(2), level 1)
- ``provider_sym2_delta`` its symmetric square lift (GL(3))

The Ramanujan tau function is generated from the eta product
Delta = q * prod (1 - q^n)^24.  The series prod (1 - q^n)^3 is sparse
(Jacobi), and its eighth power is taken by three exact squarings done in
GMP through Kronecker substitution: coefficients are packed into
fixed-width two's-complement slots of one big integer.
"""

from dataclasses import dataclass, field
import logging
import math
import os
from typing import Callable

import gmpy2
import numpy as np

from .arith import ArithTables
from .errors import CacheError, RangeError

log = logging.getLogger(__name__)

TAU_MAX_N = 1 << 25


@dataclass(frozen=True, eq=False)
class TauTable:
    """Exact tau(n) for 1 <= n <= N.

    Values live in a (N + 1, width) uint8 matrix of little-endian
    two's-complement integers; row 0 is unused.
    """
    N: int
    rows: np.ndarray = field(repr=False)

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.N:
            raise RangeError(f"tau({n}) outside table range 1..{self.N}", required=n)
        return int.from_bytes(self.rows[n].tobytes(), "little", signed=True)

    def values(self, upto: int = None):
        """tau(1..upto) as a list of Python ints."""
        upto = self.N if upto is None else upto
        return [self[n] for n in range(1, upto + 1)]

    def normalized(self, primes) -> np.ndarray:
        """lambda(p) = tau(p) p^{-11/2} for an array of primes."""
        primes = np.asarray(primes, dtype=np.int64)
        if primes.size and primes.max() > self.N:
            raise RangeError(f"tau table stops at {self.N}, prime {int(primes.max())} requested",
                             required=int(primes.max()))
        raw = self.rows[primes]
        out = np.empty(primes.size)
        for i, (p, row) in enumerate(zip(primes.tolist(), raw)):
            t = int.from_bytes(row.tobytes(), "little", signed=True)
            out[i] = t / p ** 5.5
        return out


def _slot_bytes(N: int) -> int:
    # |tau(n)| <= d(n) n^{11/2}; d(n) < 2^12 for n < 2^25, plus a sign bit and margin
    bits = 5.5 * math.log2(max(N, 2)) + 12 + 2
    return max(8, int(math.ceil(bits / 8)))


def _pack(rows: np.ndarray, width: int):
    """Signed big integer sum_i c_i 2^{8 width i} from two's-complement rows."""
    flipped = rows.copy()
    flipped[:, width - 1] ^= 0x80
    biased = gmpy2.from_binary(b"\x01\x01" + flipped.tobytes())
    return biased - _bias(rows.shape[0], width)


def _bias(n: int, width: int):
    one = b"\x00" * (width - 1) + b"\x80"
    return gmpy2.from_binary(b"\x01\x01" + one * n)


def _unpack(x, n: int, width: int) -> np.ndarray:
    """Low n signed slots of x as two's-complement rows."""
    mask = (gmpy2.mpz(1) << (8 * width * n)) - 1
    y = (x + _bias(n, width)) & mask
    raw = gmpy2.to_binary(y)[2:]
    buf = np.zeros(n * width, dtype=np.uint8)
    buf[: len(raw)] = np.frombuffer(raw, dtype=np.uint8)
    rows = buf.reshape(n, width)
    rows[:, width - 1] ^= 0x80
    return rows


def _rows_from_ints(values, width: int) -> np.ndarray:
    values = np.asarray(values, dtype=np.int64)
    rows = np.zeros((values.size, width), dtype=np.uint8)
    rows[:, :8] = values.astype("<i8").view(np.uint8).reshape(-1, 8)
    rows[values < 0, 8:] = 0xFF
    return rows


def tau_table(N: int) -> TauTable:
    """Ramanujan tau(n) for n <= N from the eta product, in exact arithmetic."""
    N = int(N)
    if N < 1 or N > TAU_MAX_N:
        raise RangeError(f"tau table size must lie in [1, {TAU_MAX_N}], got {N}")
    width = _slot_bytes(N)
    L = N  # coefficients of prod(1-q^n)^24 at q^0..q^{N-1}
    k = np.arange(0, math.isqrt(2 * L) + 2, dtype=np.int64)
    e = k * (k + 1) // 2
    keep = e < L
    series = np.zeros(L, dtype=np.int64)
    series[e[keep]] = np.where(k[keep] % 2 == 0, 2 * k[keep] + 1, -(2 * k[keep] + 1))
    x = _pack(_rows_from_ints(series, width), width)
    del series
    for _ in range(3):
        x = x * x
        rows = _unpack(x, L, width)
        x = _pack(rows, width) if _ < 2 else None
    out = np.zeros((N + 1, width), dtype=np.uint8)
    out[1:] = rows
    out.flags.writeable = False
    return TauTable(N=N, rows=out)


def save_tau(path, table: TauTable) -> None:
    """Write "n<TAB>tau(n)" lines for n = 1..N."""
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        chunk = []
        for n in range(1, table.N + 1):
            chunk.append(f"{n}\t{int.from_bytes(table.rows[n].tobytes(), 'little', signed=True)}\n")
            if len(chunk) >= 65536:
                fh.writelines(chunk)
                chunk = []
        fh.writelines(chunk)
    os.replace(tmp, path)


def load_tau(path, need: int = 1) -> TauTable:
    """Read a tau cache; requires tau(2) = -24 and at least ``need`` entries."""
    with open(path, "rb") as fh:
        N = sum(buf.count(b"\n") for buf in iter(lambda: fh.read(1 << 24), b""))
    if N < max(need, 2):
        raise CacheError(f"{path}: holds {N} values, {max(need, 2)} needed")
    width = _slot_bytes(N)
    blob = bytearray()
    with open(path) as fh:
        try:
            for i, line in enumerate(fh, start=1):
                n_str, v_str = line.split("\t")
                if int(n_str) != i:
                    raise CacheError(f"{path}: line {i} has index {n_str}")
                blob += int(v_str).to_bytes(width, "little", signed=True)
        except (ValueError, OverflowError) as exc:
            raise CacheError(f"{path}: malformed entry ({exc})") from None
    if len(blob) != N * width:
        raise CacheError(f"{path}: truncated file")
    rows = np.zeros((N + 1, width), dtype=np.uint8)
    rows[1:] = np.frombuffer(blob, dtype=np.uint8).reshape(N, width)
    rows.flags.writeable = False
    table = TauTable(N=N, rows=rows)
    if table[1] != 1 or table[2] != -24:
        raise CacheError(f"{path}: failed validation (tau(2) != -24)")
    return table


def cached_tau_table(N: int, cache_dir=None) -> TauTable:
    """tau_table(N), reusing ``cache_dir/tau.txt`` when it is large enough."""
    if cache_dir is None:
        return tau_table(N)
    os.makedirs(cache_dir, exist_ok=True)
    path = os.path.join(cache_dir, "tau.txt")
    if os.path.exists(path):
        try:
            table = load_tau(path, need=N)
            log.info("tau cache hit: %s (N=%d)", path, table.N)
            return table
        except CacheError as exc:
            log.warning("ignoring tau cache: %s", exc)
    table = tau_table(N)
    save_tau(path, table)
    log.info("tau cache written: %s (N=%d)", path, N)
    return table


# --- providers ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CoefficientProvider:
    """Prime-power coefficients of a fixed self-dual automorphic representation.

    ``coeff(primes, k)`` is vectorised over an int64 array of primes.
    """
    label: str
    degree: int
    delta: int
    coeff: Callable[[np.ndarray, int], np.ndarray] = field(repr=False)
    max_prime: float = math.inf

    def a(self, p: int, k: int) -> float:
        return float(self(np.array([p], dtype=np.int64), k)[0])

    def __call__(self, primes, k: int) -> np.ndarray:
        primes = np.asarray(primes, dtype=np.int64)
        if primes.size and primes.max() > self.max_prime:
            raise RangeError(f"{self.label}: coefficients known only for p <= {self.max_prime:g}",
                             required=int(primes.max()))
        return self.coeff(primes, k)


def provider_gl1() -> CoefficientProvider:
    return CoefficientProvider("gl1", 1, -1, lambda p, k: np.ones(np.shape(p)))


def hecke_power_sums(lam, k: int) -> np.ndarray:
    """alpha^k + beta^k with alpha + beta = lam and alpha * beta = 1."""
    lam = np.asarray(lam, dtype=float)
    prev, cur = np.full(lam.shape, 2.0), lam.copy()
    if k == 0:
        return prev
    for _ in range(k - 1):
        prev, cur = cur, lam * cur - prev
    return cur


class _LambdaCache:
    """Normalised Hecke eigenvalues, filled in on first request (NaN = unknown)."""

    def __init__(self, tau: TauTable):
        self.tau = tau
        self._dense = None

    def __call__(self, primes) -> np.ndarray:
        primes = np.asarray(primes, dtype=np.int64)
        if primes.size and primes.max() > self.tau.N:
            raise RangeError(f"tau table stops at {self.tau.N}", required=int(primes.max()))
        if self._dense is None:
            self._dense = np.full(self.tau.N + 1, np.nan)
        vals = self._dense[primes]
        missing = np.isnan(vals)
        if missing.any():
            todo = np.unique(primes[missing])
            self._dense[todo] = self.tau.normalized(todo)
            vals = self._dense[primes]
        return vals


def provider_delta(tau: TauTable) -> CoefficientProvider:
    """GL(2) provider for Delta: a(p^k) = alpha^k + beta^k, alpha + beta = lambda(p).

    Delta has trivial central character, so alpha * beta = 1 and the exterior
    square is zeta(s), whose pole makes delta(pi) = +1 (see delta_empirical).
    """
    lam = _LambdaCache(tau)
    return CoefficientProvider("delta", 2, +1, lambda p, k: hecke_power_sums(lam(p), k),
                               max_prime=tau.N)


def provider_sym2_delta(tau: TauTable) -> CoefficientProvider:
    """GL(3) provider with Satake parameters {alpha^2, 1, beta^2}."""
    lam = _LambdaCache(tau)
    return CoefficientProvider("sym2delta", 3, -1,
                               lambda p, k: hecke_power_sums(lam(p), 2 * k) + 1.0,
                               max_prime=tau.N)


def delta_empirical(provider: CoefficientProvider, x: float, tables: ArithTables) -> float:
    """(1/x) sum_{p <= x} a(p^2) log p, which tends to -delta(pi)."""
    primes = tables.primes_upto(x)
    terms = provider(primes, 2) * np.log(primes)
    return math.fsum(terms.tolist()) / x
