"""Sieving, Moebius values, Kronecker symbols and the square-divisor split."""
import numpy as np

from quadtwist.arith import build_tables, chi8d, kronecker, mz_rz, mz_rz_range

spacer = "_" * 60

tables = build_tables(10 ** 6)
print("Segmented sieve up to 10^6")
print("  number of primes:", tables.primes.size)
print("  first primes:    ", tables.primes[:10])
print("  mu(1..12):       ", tables.moebius[1:13])

print(spacer)
print("\nThe Moebius function sums to zero over the divisors of every n > 1:")
acc = np.zeros(31, dtype=int)
for d in range(1, 31):
    acc[d::d] += tables.moebius[d]
print("  sum_{d|n} mu(d) for n = 1..30:", acc[1:])

print(spacer)
print("\nKronecker symbols (a/n), including n even and negative:")
for a, n in [(8, 3), (40, 5), (5, -1), (-5, -1), (3, 2), (7, 2), (2, 15)]:
    print(f"  ({a}/{n}) = {kronecker(a, n):+d}")

print("\nchi_{8d}(n) = (8d/n) for d = 15, n = 1..20:")
print(" ", [chi8d(15, n) for n in range(1, 21)])

print(spacer)
print("\nmu^2(d) splits as M_Z(d) + R_Z(d), sums of mu(l) over l^2 | d with l <= Z or l > Z:")
for d, Z in [(9, 3), (5, 1), (49, 1), (900, 4)]:
    print(f"  d = {d:4d}, Z = {Z}: (M_Z, R_Z) = {mz_rz(d, Z)}, mu^2 = {tables.moebius[d] ** 2}")

mz, rz = mz_rz_range(1, 10 ** 5, 10, tables)
mu2 = tables.moebius[1:10 ** 5 + 1].astype(int) ** 2
print("\nOver d <= 10^5 with Z = 10 the identity holds everywhere:", np.array_equal(mz + rz, mu2))
print("  d with R_Z(d) != 0:", np.count_nonzero(rz))
