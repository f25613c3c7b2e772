"""Ramanujan tau from the eta product, and the coefficient providers built on it."""
import math

import numpy as np

from quadtwist.arith import build_tables
from quadtwist.coeffs import (delta_empirical, hecke_power_sums, provider_delta, provider_gl1,
                              provider_sym2_delta, tau_table)

spacer = "_" * 60

tau = tau_table(10 ** 5)
print("tau(n) for n = 1..12:")
print(" ", tau.values(12))
print("Multiplicativity, tau(6) = tau(2) tau(3):", tau[6], "=", tau[2] * tau[3])
print("Hecke relation at p = 2: tau(4) = tau(2)^2 - 2^11 =", tau[2] ** 2 - 2 ** 11)

tables = build_tables(10 ** 5)
p = tables.primes
lam = tau.normalized(p)
print("\nNormalised eigenvalues lambda(p) = tau(p) / p^(11/2) obey |lambda(p)| <= 2:")
print("  max |lambda(p)| for p <= 1e5:", np.abs(lam).max())

print(spacer)
print("\nPrime power coefficients a(p^k) = alpha^k + beta^k from the recurrence")
print("s_k = lambda s_{k-1} - s_{k-2}:")
for k in range(5):
    print(f"  a(2^{k}) = {hecke_power_sums(lam[:1], k)[0]: .12f}")

D = provider_delta(tau)
S = provider_sym2_delta(tau)
print(f"\nDelta:      a(2,1) = {D.a(2, 1):.14f}, a(2,2) = {D.a(2, 2)}")
print(f"sym^2 Delta: a(2,1) = {S.a(2, 1)}")

print(spacer)
print("\n(1/x) sum_{p <= x} a(p^2) log p tends to -delta(pi):")
for prov in (provider_gl1(), D, S):
    vals = [delta_empirical(prov, x, tables) for x in (1e3, 1e4, 1e5)]
    print(f"  {prov.label:10s}", "  ".join(f"{v:+.5f}" for v in vals))
print("GL(1) and sym^2 Delta approach +1; Delta itself approaches -1, because its")
print("exterior square is zeta(s) and so carries the pole.")
