"""Saddle-point loop expansions of auxiliary-field integrals, with exact coefficients."""

from .combinatorics import enumerate_multisets, n_of_L, t_coefficient, verify_appendix_b
from .exact import Rational, double_factorial, format_rational, rational
from .fermion import FermionParams, exact_partition, method1_z, method2_z, ks_model_z
from .gamma import gamma_l_loop, stirling_coefficients
from .laplace import DerivativeJet, LoopSeries, evaluate_l_loop, method1_coefficients, method2_coefficients

__version__ = "0.1.0"
