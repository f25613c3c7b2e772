"""Compiled inner loops for the family character sums."""

import os

import numpy as np
from numba import config, njit, prange

# the TBB layer probed first by default is often too old; workqueue needs nothing
if "NUMBA_THREADING_LAYER" not in os.environ:
    config.THREADING_LAYER = "workqueue"

_BLOCK = 2048


@njit(cache=True)
def _jacobi(a, n):
    # Jacobi symbol (a/n), n odd positive
    a %= n
    k = 1
    while a != 0:
        while a % 2 == 0:
            a //= 2
            r = n % 8
            if r == 3 or r == 5:
                k = -k
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            k = -k
        a %= n
    return k if n == 1 else 0


@njit(cache=True)
def _kahan_add(acc, comp, k, j, x):
    y = x - comp[k, j]
    t = acc[k, j] + y
    comp[k, j] = (t - acc[k, j]) - y
    acc[k, j] = t


@njit(parallel=True, cache=True)
def legendre_weighted_sums(ds, weights, primes, tabs, offsets, use_tabs):
    """out[r, j] = sum_i weights[r, i] * (ds[i] / primes[j]) with compensated sums.

    For every prime the terms are added sequentially in ascending d, so the
    result does not depend on how the work is spread across threads.

    Primes up to max(ds) use a Legendre table built for that prime.  Larger
    primes are processed in blocks with d as the outer loop: (p/d) is read
    from the per-d Jacobi table (tabs/offsets) at the residue p mod d, which
    is advanced along the block by prime gaps, and reciprocity gives (d/p).
    Without tables the binary Jacobi algorithm is used instead.
    """
    nr = weights.shape[0]
    nd = ds.shape[0]
    npr = primes.shape[0]
    out = np.zeros((nr, npr))
    dmax = ds[nd - 1] if nd else 0
    nsmall = 0
    while nsmall < npr and primes[nsmall] <= dmax:
        nsmall += 1
    for j in prange(nsmall):
        p = primes[j]
        acc = np.zeros((nr, 1))
        comp = np.zeros((nr, 1))
        leg = np.full(p, -1, dtype=np.int8)
        leg[0] = 0
        for r in range(1, (p + 1) // 2):
            leg[(r * r) % p] = 1
        for i in range(nd):
            v = leg[ds[i] % p]
            if v == 0:
                continue
            for k in range(nr):
                _kahan_add(acc, comp, k, 0, weights[k, i] * v)
        for k in range(nr):
            out[k, j] = acc[k, 0]
    nbig = npr - nsmall
    nblocks = (nbig + _BLOCK - 1) // _BLOCK
    for b in prange(nblocks):
        j0 = nsmall + b * _BLOCK
        j1 = min(j0 + _BLOCK, npr)
        m = j1 - j0
        acc = np.zeros((nr, m))
        comp = np.zeros((nr, m))
        ones = np.ones(m, dtype=np.int8)
        flip = np.ones(m, dtype=np.int8)
        for jj in range(m):
            if primes[j0 + jj] % 4 == 3:
                flip[jj] = -1
        for i in range(nd):
            d = ds[i]
            sign = flip if d % 4 == 3 else ones
            w0 = weights[0, i]
            base = offsets[i]
            r = primes[j0] % d
            for jj in range(m):
                p = primes[j0 + jj]
                if jj:
                    r += p - primes[j0 + jj - 1]
                    while r >= d:
                        r -= d
                if use_tabs:
                    v = tabs[base + r] * sign[jj]
                else:
                    v = _jacobi(p, d) * sign[jj]
                if nr == 1:
                    y = w0 * v - comp[0, jj]
                    t = acc[0, jj] + y
                    comp[0, jj] = (t - acc[0, jj]) - y
                    acc[0, jj] = t
                else:
                    for k in range(nr):
                        _kahan_add(acc, comp, k, jj, weights[k, i] * v)
        for k in range(nr):
            for jj in range(m):
                out[k, j0 + jj] = acc[k, jj]
    return out
