"""
Prime side of the explicit formula for a single twist chi_{8d}.

With L = M log X and the test function support (-sigma, sigma), every term
with a nonzero phi_hat factor has p^k < X^{M sigma}; that bound is the only
truncation.  Sums are taken in ascending order of p and reduced with
math.fsum (correctly rounded, hence independent of evaluation order).
"""

from dataclasses import dataclass
from functools import cached_property
import math

import numpy as np

from .arith import ArithTables, check_family_discriminant, chi8d_vector, legendre_vector
from .coeffs import CoefficientProvider
from .errors import RangeError
from .testfn import TestFunctionPair


@dataclass(frozen=True, eq=False)
class ExplicitFormulaContext:
    X: float
    provider: CoefficientProvider
    pair: TestFunctionPair
    tables: ArithTables
    prime_limit: int

    def __post_init__(self):
        if self.X < 3:
            raise ValueError(f"X must be at least 3, got {self.X}")
        if self.prime_limit < self.cutoff - 1:
            raise RangeError(f"prime limit {self.prime_limit} below X^(M sigma) = {self.cutoff:.6g}",
                             required=int(math.ceil(self.cutoff)))
        if self.tables.limit < min(self.prime_limit, math.ceil(self.cutoff)):
            raise RangeError(f"sieve limit {self.tables.limit} below the required "
                             f"{math.ceil(self.cutoff)}", required=int(math.ceil(self.cutoff)))

    @property
    def log_scale(self) -> float:
        """M log X."""
        return self.provider.degree * math.log(self.X)

    @property
    def cutoff(self) -> float:
        """X^{M sigma}: phi_hat(log m / (M log X)) vanishes for m >= cutoff."""
        return self.X ** (self.provider.degree * self.pair.sigma)

    @property
    def normalizer(self) -> float:
        """2 / (M log X)."""
        return 2.0 / self.log_scale

    @cached_property
    def primes(self) -> np.ndarray:
        """Odd primes p < X^{M sigma}."""
        p = self.tables.primes_below(self.cutoff)
        return p[p != 2]

    @cached_property
    def prime_weights(self) -> np.ndarray:
        """a(p) log p / sqrt(p) * phi_hat(log p / (M log X)) for p in ``primes``."""
        p = self.primes
        lp = np.log(p)
        return self.provider(p, 1) * lp / np.sqrt(p) * self.pair.phi_hat(lp / self.log_scale)

    @cached_property
    def power_terms(self):
        """(p, k, Lambda(m) a(p^k) m^{-1/2} phi_hat(log m / L)) for m = p^k, k >= 2, p odd."""
        out_p, out_k, out_w = [], [], []
        k = 2
        while 3 ** k < self.cutoff:
            base = self.primes[self.primes.astype(float) ** k < self.cutoff]
            base = base[np.array([int(b) ** k < self.cutoff for b in base.tolist()], dtype=bool)] \
                if base.size else base
            if base.size:
                lp = np.log(base)
                lm = k * lp
                w = lp * self.provider(base, k) * np.exp(-0.5 * lm) * self.pair.phi_hat(lm / self.log_scale)
                out_p.append(base)
                out_k.append(np.full(base.size, k))
                out_w.append(w)
            k += 1
        if not out_p:
            return np.zeros(0, np.int64), np.zeros(0, np.int64), np.zeros(0)
        p = np.concatenate(out_p)
        kk = np.concatenate(out_k)
        w = np.concatenate(out_w)
        order = np.lexsort((kk, p))
        return p[order], kk[order], w[order]


def make_context(X, provider, pair, tables, prime_limit=None) -> ExplicitFormulaContext:
    """Context with the prime limit defaulting to ceil(X^{M sigma})."""
    if prime_limit is None:
        prime_limit = int(math.ceil(X ** (provider.degree * pair.sigma)))
    return ExplicitFormulaContext(float(X), provider, pair, tables, int(prime_limit))


def s1(ctx: ExplicitFormulaContext, d: int) -> float:
    """(2/(M log X)) sum_p a(p) log p / sqrt(p) chi_{8d}(p) phi_hat(log p / (M log X))."""
    d = check_family_discriminant(d)
    chi = chi8d_vector(d, ctx.primes, ctx.tables)
    return ctx.normalizer * math.fsum((ctx.prime_weights * chi).tolist())


def s_full(ctx: ExplicitFormulaContext, d: int) -> float:
    """int phi - (2/(M log X)) sum_m Lambda(m) a(m) m^{-1/2} chi_{8d}(m) phi_hat(log m / (M log X))."""
    d = check_family_discriminant(d)
    chi = chi8d_vector(d, ctx.primes, ctx.tables)
    terms = (ctx.prime_weights * chi).tolist()
    p, k, w = ctx.power_terms
    if p.size:
        chi_p = chi8d_vector(d, p, ctx.tables).astype(float)
        terms += (w * chi_p ** k).tolist()
    return ctx.pair.integral_phi - ctx.normalizer * math.fsum(terms)


def e_partial(ctx: ExplicitFormulaContext, q: int, V: float) -> float:
    """sum_{p <= V} a(p) log p / sqrt(p) chi_{8q}(p) phi_hat(log p / (M log X)), q odd."""
    q = int(q)
    if q < 1 or q % 2 == 0:
        raise ValueError(f"q must be odd and positive, got {q}")
    if V > ctx.prime_limit:
        raise RangeError(f"V = {V:g} exceeds the prime limit {ctx.prime_limit}", required=int(math.ceil(V)))
    p = ctx.tables.primes_upto(V)
    p = p[p != 2]
    if p.size == 0:
        return 0.0
    lp = np.log(p)
    w = ctx.provider(p, 1) * lp / np.sqrt(p) * ctx.pair.phi_hat(lp / ctx.log_scale)
    two = np.where((p % 8 == 1) | (p % 8 == 7), 1, -1)
    chi = two * legendre_vector(q, p, ctx.tables)
    return math.fsum((w * chi).tolist())
