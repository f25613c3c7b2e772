"""The Fejer test function, smooth weights, and the symplectic prediction."""
import numpy as np

from quadtwist.testfn import bump_weight, fejer_pair, rmt_prediction, usp_kernel

spacer = "_" * 60

pair = fejer_pair(1.2)
print("Fejer pair with sigma = 1.2: phi_hat is a triangle on (-1.2, 1.2)")
u = np.linspace(-1.5, 1.5, 7)
print("  u       :", u)
print("  phi_hat :", pair.phi_hat(u))
print("  phi(0)  :", pair.phi(0.0), " int phi =", pair.integral_phi)
print("  int over [-1, 1] of phi_hat:", pair.integral_phi_hat_unit)

print(spacer)
print("\nSymplectic prediction int phi (1 - sin(2 pi x)/(2 pi x)) dx:")
for s in (0.5, 0.8, 1.0, 1.2, 1.5):
    print(f"  sigma = {s:3.1f}: {rmt_prediction(fejer_pair(s)):.12f}")

x = np.linspace(0, 3, 7)
print("\nThe kernel W_USp(x) vanishes at 0 and tends to 1:")
print(" ", np.round(usp_kernel(x), 6))

print(spacer)
w = bump_weight(1.0, 2.0)
print("\nBump weight on [1, 2]")
print("  w(1), w(1.5), w(2):", w(1.0), w(1.5), w(2.0))
print("  integral:", w.integral)
