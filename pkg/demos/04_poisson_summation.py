"""Mellin transforms, the dual kernel W~, and Poisson summation for (./q)."""
import numpy as np

from quadtwist.poisson import (MellinContour, QuadraticCharacter, gauss_sum, mellin,
                               odd_restricted_direct, odd_restricted_dual, poisson_check, w_tilde)
from quadtwist.testfn import bump_weight

spacer = "_" * 60
W = bump_weight(1.0, 2.0)

print("Mellin transform of the bump along Re s = 1.25:")
for t in (0, 40, 160, 400):
    print(f"  |MW(1.25 + {t}i)| = {abs(mellin(W, 1.25 + 1j * t)):.3e}")
print("The decay is faster than any power of t but only like exp(-C sqrt t),")
print("which is why the contour is sampled up to height 1000.")

print(spacer)
print("\nGauss sums tau(chi) = i^a sqrt(q):")
for q in (3, 5, 7, 13, 17):
    a = QuadraticCharacter(q).parity
    print(f"  q = {q:2d}, a = {a}: tau = {gauss_sum(q):.12f}")

print(spacer)
print("\nThe dual kernel for b = 0 and 1:")
x = np.array([0.1, 0.5, 1.0, 2.0, 10.0])
print("  x      :", x)
print("  W~_0(x):", np.round(w_tilde(W, 0, x), 8))
print("  W~_1(x):", np.round(w_tilde(W, 1, x), 8))

print("\nContour shift: c = 1.25 and c = 1.75 (height 2000) agree to",
      np.abs(w_tilde(W, 0, x) - w_tilde(W, 0, x, MellinContour(1.75, height=2000.0))).max())

print(spacer)
print("\nsum_n chi(n) W(n/X) against (X/sqrt q) sum_m chi(m) W~_a(mX/q):")
print("   q    X              lhs              rhs      diff  mTerms")
for q in (3, 5, 7, 11, 13):
    for X in (5.0, 50.0):
        lhs, rhs, m = poisson_check(q, W, X)
        print(f"  {q:2d} {X:4g} {lhs:16.12f} {rhs:16.12f} {abs(lhs - rhs):9.1e} {m:7d}")

print("\nOdd d only, scaled by alpha^2 (two dual sums combined):")
for p, alpha in ((3, 1), (5, 3), (7, 1)):
    a = odd_restricted_direct(p, W, 1e3, alpha)
    b = odd_restricted_dual(p, W, 1e3, alpha)
    print(f"  p = {p}, alpha = {alpha}: direct {a:.10f}  dual {b:.10f}")
