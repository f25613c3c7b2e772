import math
import random

import mpmath
import numpy as np
import pytest

from quadtwist.arith import build_tables, chi8d, kronecker
from quadtwist.coeffs import provider_gl1
from quadtwist.errors import RangeError
from quadtwist.explicit import ExplicitFormulaContext, e_partial, make_context, s1, s_full
from quadtwist.testfn import fejer_pair


def s1_oracle(X, sigma, d, dps=40):
    """High-precision s1 for GL(1) and the Fejer pair, term by term."""
    mpmath.mp.dps = dps
    L = mpmath.log(X)
    total = mpmath.mpf(0)
    p = 3
    while p < X ** sigma:
        if all(p % f for f in range(2, math.isqrt(p) + 1)):
            u = mpmath.log(p) / L
            total += mpmath.log(p) / mpmath.sqrt(p) * kronecker(8 * d, p) * max(0, 1 - u / sigma)
        p += 2
    return float(2 / L * total)


def test_s1_three_term_example(small_tables):
    ctx = make_context(10, provider_gl1(), fejer_pair(1.0), small_tables)
    assert [chi8d(1, p) for p in (3, 5, 7)] == [-1, -1, 1]
    assert s1(ctx, 1) == pytest.approx(s1_oracle(10, 1.0, 1), abs=1e-15)
    assert s1(ctx, 1) == pytest.approx(-0.3773, abs=5e-5)


@pytest.mark.parametrize("X,sigma,d", [(1e3, 1.0, 15), (5e3, 0.7, 1), (2e3, 1.5, 105)])
def test_s1_oracle(tables, X, sigma, d):
    ctx = make_context(X, provider_gl1(), fejer_pair(sigma), tables)
    assert s1(ctx, d) == pytest.approx(s1_oracle(X, sigma, d), abs=1e-13)


def test_empty_support(small_tables):
    # X^sigma < 3: no odd prime in the support
    ctx = make_context(4, provider_gl1(), fejer_pair(0.75), small_tables)
    assert s1(ctx, 1) == 0.0


def test_precondition_checks(small_tables):
    ctx = make_context(100, provider_gl1(), fejer_pair(1.0), small_tables)
    for d in (25, 4, 0):
        with pytest.raises(ValueError):
            s1(ctx, d)
    with pytest.raises(ValueError):
        make_context(2, provider_gl1(), fejer_pair(1.0), small_tables)


def test_range_error_names_limit(small_tables):
    with pytest.raises(RangeError) as exc:
        make_context(1e5, provider_gl1(), fejer_pair(1.0), small_tables)
    assert exc.value.required == 100000


def test_s_full_reduces_to_s1_below_nine(small_tables):
    # X^sigma = 8.5: odd prime powers p^k >= 9 are outside the support
    X = 8.5
    ctx = make_context(X, provider_gl1(), fejer_pair(1.0), small_tables)
    for d in (1, 3, 5, 7, 105):
        assert s_full(ctx, d) == pytest.approx(ctx.pair.integral_phi - s1(ctx, d), abs=1e-15)


def test_s_full_excludes_ramified(small_tables):
    X = 1e3
    ctx = make_context(X, provider_gl1(), fejer_pair(1.0), small_tables)
    L = math.log(X)
    terms = []
    for m in range(3, int(X)):
        fac = small_tables.factor(m)
        if len(fac) != 1:
            continue
        p, k = fac[0]
        terms.append(math.log(p) * chi8d(3, m) / math.sqrt(m) * max(0.0, 1 - math.log(m) / L))
    assert s_full(ctx, 3) == pytest.approx(1 - 2 / L * math.fsum(terms), abs=1e-13)


def test_mode_gap_shrinks(tables):
    gaps = []
    for X in (1e4, 1e5):
        ctx = make_context(X, provider_gl1(), fejer_pair(1.0), tables)
        simplified = ctx.pair.integral_phi - 0.5 * ctx.pair.integral_phi_hat_full - s1(ctx, 1)
        gaps.append(abs(s_full(ctx, 1) - simplified))
    assert gaps[0] <= 0.5
    assert gaps[1] < gaps[0]


def test_e_partial(small_tables):
    X = 1e3
    ctx = make_context(X, provider_gl1(), fejer_pair(1.0), small_tables)
    assert e_partial(ctx, 7, 2.9) == 0.0
    assert ctx.normalizer * e_partial(ctx, 1, ctx.prime_limit) == pytest.approx(s1(ctx, 1), abs=1e-14)
    a, b = e_partial(ctx, 45, 100), e_partial(ctx, 45, 400)
    between = [math.log(p) / math.sqrt(p) * kronecker(8 * 45, p) * (1 - math.log(p) / math.log(X))
               for p in small_tables.primes.tolist() if 100 < p <= 400]
    assert b - a == pytest.approx(math.fsum(between), abs=1e-12)
    with pytest.raises(RangeError):
        e_partial(ctx, 1, 2e3)
    with pytest.raises(ValueError):
        e_partial(ctx, 4, 100)


def test_e_partial_envelope(tables):
    rng = random.Random(7)
    for _ in range(10):
        q = rng.randrange(1, 1000, 2)
        V = rng.uniform(3, 1e5)
        ctx = make_context(1e5, provider_gl1(), fejer_pair(1.0), tables)
        assert abs(e_partial(ctx, q, V)) <= 3 * math.log(q * 1e5) ** 3


def test_character_factorisation_consistent(small_tables):
    ctx = make_context(5e3, provider_gl1(), fejer_pair(1.0), small_tables)
    # 3 * 5 * 7 = 105: same value however the discriminant was assembled
    assert s1(ctx, 3 * 35) == s1(ctx, 105) == s1(ctx, 15 * 7)


def test_prime_limit_extension(small_tables):
    a = make_context(1e3, provider_gl1(), fejer_pair(1.0), small_tables)
    b = make_context(1e3, provider_gl1(), fejer_pair(1.0), small_tables, prime_limit=9000)
    for d in (1, 11, 105):
        assert s1(a, d) == s1(b, d)
        assert s_full(a, d) == s_full(b, d)


def test_context_is_frozen(small_tables):
    ctx = make_context(1e3, provider_gl1(), fejer_pair(1.0), small_tables)
    assert isinstance(ctx, ExplicitFormulaContext)
    with pytest.raises(Exception):
        ctx.X = 5.0
