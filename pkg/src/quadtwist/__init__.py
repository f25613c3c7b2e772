"""
quadtwist
=========

Numerical one-level density of quadratic twist families chi_{8d} of a
fixed self-dual automorphic L-function, compared against the symplectic
random-matrix prediction, plus exact checks of the Mellin-Poisson summation
formula for smoothed quadratic character sums.

Modules
-------
arith     sieve, Moebius, Kronecker symbols, the M_Z / R_Z split
coeffs    Ramanujan tau and coefficient providers
testfn    test functions, weights, the symplectic prediction
explicit  per-twist prime sums of the explicit formula
poisson   Mellin transforms, the W-tilde kernel, Poisson summation
density   family averages and reports
cli       command-line front end (``python -m quadtwist``)
"""

from .arith import ArithTables, build_tables, chi8d, kronecker, mz_rz
from .coeffs import (CoefficientProvider, TauTable, delta_empirical, provider_delta,
                     provider_gl1, provider_sym2_delta, tau_table)
from .density import DensityReport, FamilySpec, s_m_dual, s_split, total_weight
from .errors import AccuracyError, CacheError, EmptyFamilyError, RangeError
from .explicit import ExplicitFormulaContext, e_partial, make_context, s1, s_full
from .poisson import (MellinContour, QuadraticCharacter, gauss_sum, mellin, odd_restricted_dual,
                      poisson_check, w_tilde)
from .testfn import (SmoothCompactFunction, TestFunctionPair, bump_weight, fejer_pair,
                     rmt_prediction)

__version__ = "0.1.0"
