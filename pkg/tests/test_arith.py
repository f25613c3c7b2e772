import math
import os

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quadtwist.arith import (MAX_LIMIT, build_tables, check_family_discriminant, chi8d,
                             chi8d_vector, jacobi_table, kronecker, legendre_vector,
                             load_primes, mz_rz, mz_rz_range, save_primes)
from quadtwist.errors import CacheError, RangeError


# --- oracles -----------------------------------------------------------------

def trial_division_primes(n):
    return [k for k in range(2, n + 1) if all(k % f for f in range(2, math.isqrt(k) + 1))]


def mu_oracle(n):
    out, f = 1, 2
    while f * f <= n:
        if n % f == 0:
            n //= f
            if n % f == 0:
                return 0
            out = -out
        f += 1
    return -out if n > 1 else out


def euler_legendre(a, p):
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def mz_rz_oracle(d, Z):
    m = r = 0
    for l in range(1, math.isqrt(d) + 1):
        if d % (l * l) == 0:
            if l <= Z:
                m += mu_oracle(l)
            else:
                r += mu_oracle(l)
    return m, r


# --- sieve -------------------------------------------------------------------

def test_small_sieve():
    t = build_tables(10)
    assert t.primes.tolist() == [2, 3, 5, 7]
    assert (t.mu(1), t.mu(4), t.mu(6)) == (1, 0, 1)
    assert build_tables(50).mu(30) == -1


def test_sieve_matches_trial_division():
    t = build_tables(10 ** 4, segment_size=777)
    assert t.primes.tolist() == trial_division_primes(10 ** 4)
    assert all(t.mu(n) == mu_oracle(n) for n in range(1, 3000))


def test_moebius_sum_over_divisors(small_tables):
    n_max = 2000
    acc = np.zeros(n_max + 1, dtype=np.int64)
    for d in range(1, n_max + 1):
        acc[d::d] += small_tables.moebius[d]
    assert acc[1] == 1
    assert not acc[2:].any()


def test_segment_size_independent():
    a = build_tables(10 ** 6)
    b = build_tables(10 ** 6, segment_size=65_537)
    assert a.primes.size == b.primes.size == 78498
    assert np.array_equal(a.moebius, b.moebius)
    assert np.array_equal(a.spf, b.spf)


def test_squarefree_odd(small_tables):
    n = np.arange(1, 500)
    expect = [(k % 2 == 1) and mu_oracle(k) != 0 for k in n]
    assert small_tables.squarefree_odd(n).tolist() == expect


def test_limits_rejected():
    with pytest.raises(RangeError):
        build_tables(1)
    with pytest.raises(RangeError):
        build_tables(MAX_LIMIT + 1)


def test_range_error_names_requirement(small_tables):
    with pytest.raises(RangeError) as exc:
        small_tables.primes_upto(20000)
    assert exc.value.required == 20000


def test_factor(small_tables):
    assert small_tables.factor(360) == [(2, 3), (3, 2), (5, 1)]
    assert small_tables.factor(9973) == [(9973, 1)]


def test_prime_cache_roundtrip(tmp_path, small_tables):
    path = tmp_path / "primes.bin"
    save_primes(path, small_tables.primes)
    raw = path.read_bytes()
    assert int.from_bytes(raw[:8], "little") == small_tables.primes.size
    assert np.array_equal(load_primes(path), small_tables.primes)
    path.write_bytes(raw[:-3])
    with pytest.raises(CacheError):
        load_primes(path)


# --- symbols -----------------------------------------------------------------

def test_kronecker_examples():
    assert kronecker(8, 3) == -1
    assert kronecker(40, 5) == 0
    assert all(kronecker(1, n) == 1 for n in range(1, 50))
    assert kronecker(8 * 7, 7) == 0
    assert [kronecker(a, 7) for a in range(7)] == [euler_legendre(a, 7) if a else 0 for a in range(7)]
    assert kronecker(24, 7) == kronecker(3, 7)


def test_kronecker_zero_zero():
    with pytest.raises(ValueError):
        kronecker(0, 0)


def test_kronecker_two_and_sign_rules():
    assert [kronecker(a, 2) for a in (8, 1, 7, 3, 5)] == [0, 1, 1, -1, -1]
    assert kronecker(5, -1) == 1 and kronecker(-5, -1) == -1
    assert kronecker(1, 0) == 1 and kronecker(2, 0) == 0


def test_kronecker_euler_table():
    for p in trial_division_primes(200)[1:]:
        for a in range(-50, 50):
            assert kronecker(a, p) == euler_legendre(a, p)


@settings(max_examples=1000, deadline=None)
@given(st.integers(-10 ** 6, 10 ** 6), st.integers(-10 ** 6, 10 ** 6), st.integers(0, 10 ** 6))
def test_kronecker_multiplicative(a, b, k):
    n = 2 * k + 1
    assert kronecker(a, n) * kronecker(b, n) == kronecker(a * b, n)


def test_chi8d_examples():
    assert chi8d(1, 2) == 0
    assert chi8d(1, 7) == 1
    assert chi8d(3, 5) == kronecker(24, 5) == 1


def test_chi8d_rejects_bad_d():
    for d in (0, -3, 4, 25, 45):
        with pytest.raises(ValueError):
            chi8d(d, 3)


@settings(max_examples=300, deadline=None)
@given(st.sampled_from([1, 3, 5, 7, 15, 21, 105, 1001]), st.integers(1, 10 ** 5), st.integers(1, 10 ** 5))
def test_chi8d_completely_multiplicative(d, m, n):
    assert chi8d(d, m * n) == chi8d(d, m) * chi8d(d, n)


def test_chi8d_periodic_and_vanishing():
    d = 15
    for n in range(1, 400):
        v = chi8d(d, n)
        assert v == chi8d(d, n + 8 * d)
        assert (v == 0) == (math.gcd(n, 8 * d) > 1)


def test_vectorised_symbols(small_tables):
    primes = small_tables.primes
    for q in (1, 3, 9, 15, 45, 77, 1001):
        expect = [kronecker(q, int(p)) for p in primes[1:]]
        assert legendre_vector(q, primes[1:], small_tables).tolist() == expect
        expect8 = [kronecker(8 * q, int(p)) for p in primes]
        assert chi8d_vector(q, primes, small_tables).tolist() == expect8
    assert jacobi_table(45).tolist() == [kronecker(r, 45) for r in range(45)]


def test_check_family_discriminant():
    assert check_family_discriminant(15) == 15
    with pytest.raises(ValueError):
        check_family_discriminant(9)


# --- square-divisor split ------------------------------------------------------

def test_mz_rz_examples():
    assert mz_rz(9, 3) == (0, 0)
    assert mz_rz(5, 1) == (1, 0)
    assert mz_rz(49, 1) == (1, -1)


def test_mz_rz_matches_oracle(small_tables):
    for d in range(1, 2000):
        for Z in (1, 2.5, 10):
            assert mz_rz(d, Z, small_tables) == mz_rz_oracle(d, Z)


def test_mz_rz_range_exact_sum(small_tables):
    t = build_tables(10 ** 5)
    mu2 = t.moebius[1:].astype(np.int32) ** 2
    for Z in (1, 10, 100):
        mz, rz = mz_rz_range(1, 10 ** 5, Z, small_tables)
        assert np.array_equal(mz + rz, mu2)
    mz, rz = mz_rz_range(1, 3000, 10, small_tables)
    assert [(int(a), int(b)) for a, b in zip(mz[:500], rz[:500])] == \
        [mz_rz(d, 10, small_tables) for d in range(1, 501)]
