"""Family averages over chi_{8d}: the one-level density against its prediction."""
import math

from quadtwist.arith import build_tables
from quadtwist.coeffs import provider_gl1
from quadtwist.density import FamilySpec, density, s_m_terms_direct, s_m_terms_dual, s_split, total_weight
from quadtwist.testfn import bump_weight, fejer_pair

spacer = "_" * 60
tables = build_tables(2 * 10 ** 6)
w = bump_weight(1.0, 2.0)
gl1 = provider_gl1()

print("Total weight W(X) against 4 X int w / pi^2:")
for X in (1e4, 1e5, 1e6):
    W = total_weight(FamilySpec(X, w, gl1, fejer_pair(1.0)), tables)
    print(f"  X = {X:8g}: ratio = {W * math.pi ** 2 / (4 * X * w.integral):.6f}")

print(spacer)
print("\nGL(1), Fejer sigma = 1, both modes (prediction 0.5):")
print("        X   simplified        full")
for X in (1e3, 1e4, 1e5):
    simp = density(FamilySpec(X, w, gl1, fejer_pair(1.0)), tables)
    full = density(FamilySpec(X, w, gl1, fejer_pair(1.0), "full"), tables)
    print(f"  {X:7g}   {simp.empirical_D:.6f}    {full.empirical_D:.6f}")
print("The simplified mode drops the prime squares; the gap closes slowly, like")
print("log log X / log X.")

print("\nSeveral supports at X = 1e5:")
for s in (0.5, 0.8, 1.0, 1.2):
    rep = density(FamilySpec(1e5, w, gl1, fejer_pair(s)), tables)
    print(f"  sigma = {s}: D = {rep.empirical_D:.5f}, prediction {rep.prediction:.5f}")

print(spacer)
X = 1e4
print(f"\nSplitting mu^2 = M_Z + R_Z at X = {X:g}:")
for Z in (1, 10, math.log(X) ** 3):
    sM, sR = s_split(FamilySpec(X, w, gl1, fejer_pair(1.0), Z=Z), tables)
    print(f"  Z = {Z:8.2f}: S_M = {sM:12.6f}  S_R = {sR:12.6f}  sum = {sM + sR:.10f}")

spec = FamilySpec(1e3, w, gl1, fejer_pair(1.0), Z=10)
p, direct = s_m_terms_direct(spec, tables, 13)
_, dual = s_m_terms_dual(spec, tables, 13)
print("\nS_M per prime, direct against Poisson dual (X = 1e3, Z = 10):")
for pi, a, b in zip(p, direct, dual):
    print(f"  p = {pi:2d}: {a: .10f}  {b: .10f}")
