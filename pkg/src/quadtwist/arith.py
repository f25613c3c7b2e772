"""
Arithmetic tables and quadratic symbols.

Provides:
- Segmented sieve producing primes, Mobius values and smallest prime factors
- Kronecker symbol (binary reciprocity algorithm)
- The characters chi_{8d}, scalar and vectorised over arrays of primes
- Legendre / Jacobi residue tables used by the family sums
- The truncated square-divisor split mu^2(d) = M_Z(d) + R_Z(d)
- A flat binary cache for prime lists
"""

from dataclasses import dataclass, field
from functools import lru_cache
import math
import os
from typing import Tuple

import numpy as np

from .errors import CacheError, RangeError

DEFAULT_SEGMENT = 1 << 20
MAX_LIMIT = 1 << 31


@dataclass(frozen=True, eq=False)
class ArithTables:
    """Sieved arithmetic data for 1 <= n <= limit.

    Attributes:
        limit: Largest tabulated integer
        primes: int64 array of primes <= limit, ascending
        moebius: int8 array, moebius[n] = mu(n) (index 0 unused, set to 0)
        spf: int32 array, spf[n] = smallest prime factor of n (spf[1] = 1)
    """
    limit: int
    primes: np.ndarray
    moebius: np.ndarray
    spf: np.ndarray = field(repr=False)

    def squarefree_odd(self, n):
        """True where n is odd and square-free (vectorised over arrays)."""
        n = np.asarray(n)
        return (n % 2 == 1) & (self.moebius[n] != 0)

    def mu(self, n: int) -> int:
        return int(self.moebius[n])

    def primes_upto(self, x) -> np.ndarray:
        """Primes p <= x; raises RangeError when x exceeds the sieve."""
        if x > self.limit:
            raise RangeError(f"primes up to {x:g} requested but sieve stops at {self.limit}",
                             required=int(math.ceil(x)))
        return self.primes[: np.searchsorted(self.primes, x, side="right")]

    def primes_below(self, x) -> np.ndarray:
        """Primes p < x (strict); the sieve must reach ceil(x) - 1."""
        need = int(math.ceil(x)) - 1
        if need > self.limit:
            raise RangeError(f"primes below {x:g} requested but sieve stops at {self.limit}",
                             required=need)
        return self.primes[: np.searchsorted(self.primes, x, side="left")]

    def factor(self, n: int):
        """Factorisation of n <= limit as a list of (prime, exponent)."""
        if n < 1 or n > self.limit:
            raise RangeError(f"cannot factor {n} with sieve limit {self.limit}", required=n)
        out = []
        while n > 1:
            p = int(self.spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out


def _small_primes(n: int) -> np.ndarray:
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for i in range(2, math.isqrt(n) + 1):
        if flags[i]:
            flags[i * i::i] = False
    return np.nonzero(flags)[0].astype(np.int64)


def build_tables(limit: int, segment_size: int = DEFAULT_SEGMENT) -> ArithTables:
    """Sieve primes, Mobius values and smallest prime factors up to ``limit``.

    The range is processed in segments of ``segment_size`` integers using the
    base primes up to sqrt(limit); peak scratch memory is O(segment_size).
    """
    limit = int(limit)
    if limit < 2 or limit > MAX_LIMIT:
        raise RangeError(f"sieve limit must lie in [2, 2**31], got {limit}")
    if segment_size < 16:
        raise ValueError("segment_size too small")
    base = _small_primes(math.isqrt(limit) + 1)
    moebius = np.zeros(limit + 1, dtype=np.int8)
    spf = np.zeros(limit + 1, dtype=np.int32)
    prime_chunks = []
    for lo in range(1, limit + 1, segment_size):
        hi = min(lo + segment_size, limit + 1)
        n = np.arange(lo, hi, dtype=np.int64)
        mu = np.ones(hi - lo, dtype=np.int8)
        prod = np.ones(hi - lo, dtype=np.int64)
        sp = np.zeros(hi - lo, dtype=np.int32)
        for p in base:
            p = int(p)
            if p * p > hi - 1 and p > hi - 1:
                break
            start = (-lo) % p
            sl = slice(start, None, p)
            mu[sl] = -mu[sl]
            prod[sl] *= p
            view = sp[sl]
            view[view == 0] = p
            sp[sl] = view
            p2 = p * p
            if p2 <= hi - 1:
                mu[(-lo) % p2::p2] = 0
        # one prime factor above sqrt(limit) remains wherever prod < n
        big = (prod < n) & (mu != 0)
        mu[big] = -mu[big]
        unset = sp == 0
        sp[unset] = n[unset]
        if lo == 1:
            mu[0] = 1
            sp[0] = 1
        moebius[lo:hi] = mu
        spf[lo:hi] = sp
        is_p = (sp == n) & (n >= 2)
        prime_chunks.append(n[is_p])
    primes = np.concatenate(prime_chunks) if prime_chunks else np.zeros(0, np.int64)
    moebius.flags.writeable = False
    spf.flags.writeable = False
    primes.flags.writeable = False
    return ArithTables(limit=limit, primes=primes, moebius=moebius, spf=spf)


def save_primes(path, primes) -> None:
    """Write primes as an 8-byte little-endian count followed by int64 values."""
    arr = np.ascontiguousarray(primes, dtype="<i8")
    tmp = f"{path}.tmp"
    with open(tmp, "wb") as fh:
        fh.write(np.array([arr.size], dtype="<u8").tobytes())
        fh.write(arr.tobytes())
    os.replace(tmp, path)


def load_primes(path) -> np.ndarray:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < 8:
        raise CacheError(f"{path}: truncated header")
    count = int(np.frombuffer(raw[:8], dtype="<u8")[0])
    if len(raw) != 8 + 8 * count:
        raise CacheError(f"{path}: header says {count} primes, file holds {(len(raw) - 8) // 8}")
    primes = np.frombuffer(raw[8:], dtype="<i8").astype(np.int64)
    if count and (primes[0] != 2 or np.any(np.diff(primes) <= 0)):
        raise CacheError(f"{path}: prime list is not strictly increasing from 2")
    return primes


# --- symbols -----------------------------------------------------------------

_TAB2 = (0, 1, 0, -1, 0, -1, 0, 1)  # (2/n) for odd n, indexed by n mod 8


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for arbitrary integers, not both zero."""
    a = int(a)
    n = int(n)
    if n == 0:
        if a == 0:
            raise ValueError("kronecker(0, 0) is undefined")
        return 1 if a in (1, -1) else 0
    if a % 2 == 0 and n % 2 == 0:
        return 0
    v = (n & -n).bit_length() - 1
    n >>= v
    k = 1 if v % 2 == 0 else _TAB2[a & 7]
    if n < 0:
        n = -n
        if a < 0:
            k = -k
    # n is now odd and positive
    a %= n
    while a:
        v = (a & -a).bit_length() - 1
        a >>= v
        if v % 2 and (n & 7) in (3, 5):
            k = -k
        if a & n & 2:
            k = -k
        a, n = n % a, a
    return k if n == 1 else 0


def _is_squarefree(d: int) -> bool:
    if d % 4 == 0:
        return False
    f = 3
    while f * f <= d:
        if d % (f * f) == 0:
            return False
        f += 2
    return True


def check_family_discriminant(d) -> int:
    d = int(d)
    if d < 1 or d % 2 == 0 or not _is_squarefree(d):
        raise ValueError(f"d = {d} must be odd, positive and square-free")
    return d


def chi8d(d: int, n: int) -> int:
    """The primitive character chi_{8d}(n) = (8d/n) for odd square-free d > 0."""
    d = check_family_discriminant(d)
    if n < 1:
        raise ValueError("n must be positive")
    return kronecker(8 * d, n)


@lru_cache(maxsize=4096)
def legendre_table(p: int) -> np.ndarray:
    """int8 array t with t[r] = (r/p) for 0 <= r < p, p an odd prime."""
    t = np.full(p, -1, dtype=np.int8)
    t[0] = 0
    r = np.arange(1, (p + 1) // 2, dtype=np.int64)
    t[(r * r) % p] = 1
    t.flags.writeable = False
    return t


def _factor_small(n: int):
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            e = 0
            while n % f == 0:
                n //= f
                e += 1
            out.append((f, e))
        f += 1 if f == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def jacobi_table(q: int, tables: ArithTables = None) -> np.ndarray:
    """int8 array t with t[r] = Jacobi symbol (r/q) for 0 <= r < q, q odd > 0."""
    if q < 1 or q % 2 == 0:
        raise ValueError("Jacobi modulus must be odd and positive")
    if q == 1:
        return np.ones(1, dtype=np.int8)
    fac = tables.factor(q) if tables is not None and q <= tables.limit else _factor_small(q)
    t = np.ones(q, dtype=np.int8)
    zero = np.zeros(q, dtype=bool)
    for ell, e in fac:
        leg = np.tile(legendre_table(ell), q // ell)
        if e % 2:
            t *= leg
        else:
            zero |= leg == 0
    t[zero] = 0
    return t


def legendre_vector(q: int, primes, tables: ArithTables = None) -> np.ndarray:
    """(q/p) for an array of odd primes p and an odd positive q.

    Evaluated through reciprocity, (q/p) = (p/q) * (-1)^{(p-1)/2 (q-1)/2},
    so one Jacobi table of size q serves every prime at once.
    """
    primes = np.asarray(primes, dtype=np.int64)
    t = jacobi_table(q, tables)
    out = t[primes % q].astype(np.int8)
    if q % 4 == 3:
        out[primes % 4 == 3] *= -1
    return out


def chi8d_vector(q: int, primes, tables: ArithTables = None) -> np.ndarray:
    """kronecker(8q, p) over an array of primes p (p = 2 gives 0); q odd > 0."""
    primes = np.asarray(primes, dtype=np.int64)
    out = np.zeros(primes.shape, dtype=np.int8)
    odd = primes != 2
    po = primes[odd]
    two = np.where((po % 8 == 1) | (po % 8 == 7), 1, -1).astype(np.int8)
    out[odd] = two * legendre_vector(q, po, tables)
    return out


def two_symbol(primes) -> np.ndarray:
    """(2/p) over an array of odd primes."""
    primes = np.asarray(primes)
    return np.where((primes % 8 == 1) | (primes % 8 == 7), 1, -1).astype(np.int8)


# --- square-divisor split ----------------------------------------------------

def mz_rz(d: int, Z: float, tables: ArithTables = None) -> Tuple[int, int]:
    """(M_Z(d), R_Z(d)): sums of mu(l) over l^2 | d split at l <= Z / l > Z.

    The square part s (largest s with s^2 | d) is read off the factorisation;
    l^2 | d exactly when l | s.
    """
    d = int(d)
    if d < 1:
        raise ValueError("d must be positive")
    fac = tables.factor(d) if tables is not None and d <= tables.limit else _factor_small(d)
    s_primes = [p for p, e in fac if e >= 2]
    m = r = 0
    # only square-free l | s carry mu(l) != 0
    for mask in range(1 << len(s_primes)):
        l = 1
        bits = 0
        for i, p in enumerate(s_primes):
            if mask >> i & 1:
                l *= p
                bits += 1
        sign = -1 if bits % 2 else 1
        if l <= Z:
            m += sign
        else:
            r += sign
    return m, r


def mz_rz_range(lo: int, hi: int, Z: float, tables: ArithTables):
    """M_Z(d), R_Z(d) for all lo <= d <= hi as two int32 arrays."""
    n = hi - lo + 1
    mz = np.zeros(n, dtype=np.int32)
    rz = np.zeros(n, dtype=np.int32)
    lmax = math.isqrt(hi)
    if lmax > tables.limit:
        raise RangeError("sieve too short for the square divisors", required=lmax)
    for l in range(1, lmax + 1):
        mu = int(tables.moebius[l])
        if mu == 0:
            continue
        sq = l * l
        start = (-lo) % sq
        target = mz if l <= Z else rz
        target[start::sq] += mu
    return mz, rz
