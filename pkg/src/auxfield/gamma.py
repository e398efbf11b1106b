"""Gamma(N) = N^N int_0^inf dt (1/t) exp(-N(t - ln t)) by both expansion methods.

The saddle of t - ln t sits at t = 1 with f(1) = 1, f^(m)(1) = (-1)^m (m-1)!,
and the prefactor 1/t has g^(n)(1) = (-1)^n n!.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .combinatorics import n_of_L
from .laplace import DerivativeJet, method1_coefficients, method2_coefficients
from .quadrature import gamma_by_quadrature

MAX_GOLDEN_ORDER = 14


def gamma_jet(L_max: int) -> DerivativeJet:
    """Exact jet of f = t - ln t and g = 1/t at t = 1, deep enough for L_max orders."""
    n_top = 2 * L_max + 3
    f_derivs = [Fraction((-1) ** m * math.factorial(m - 1)) for m in range(2, n_top + 1)]
    g_derivs = [Fraction((-1) ** n * math.factorial(n)) for n in range(2 * L_max + 1)]
    return DerivativeJet(Fraction(1), f_derivs, g_derivs)


@lru_cache(maxsize=None)
def _stirling(L_max: int) -> tuple[Fraction, ...]:
    return tuple(method1_coefficients(gamma_jet(L_max), L_max).coeffs)


def stirling_coefficients(L_max: int = MAX_GOLDEN_ORDER) -> list[Fraction]:
    """[c_0, ..., c_{L_max}] of Gamma(N) ~ N^N e^-N sqrt(2pi/N) sum c_L / N^L, exactly."""
    if L_max < 0:
        raise ValueError("L_max must be >= 0")
    return list(_stirling(L_max))


def exact_gamma(N: float) -> float:
    """(N-1)! for integer N; the quadrature oracle otherwise."""
    if float(N).is_integer() and N >= 1:
        return float(math.factorial(int(N) - 1))
    return gamma_by_quadrature(N)


@dataclass(frozen=True)
class GammaEval:
    N: float
    l: int
    approx: float
    exact: float

    @property
    def ratio(self) -> float:
        return self.approx / self.exact


def gamma_l_loop(N: float, l: int) -> GammaEval:
    """Tree (l = 0) or l-loop approximation of Gamma(N)."""
    if not N > 0:
        raise ValueError("N must be positive")
    if l < 0 or l > MAX_GOLDEN_ORDER + 1:
        raise ValueError(f"loop order must lie in 0..{MAX_GOLDEN_ORDER + 1}")
    base = N ** N * math.exp(-N)
    if l == 0:
        approx = base
    else:
        coeffs = _stirling(MAX_GOLDEN_ORDER)
        series = sum(float(coeffs[L]) / N ** L for L in range(l))
        approx = base * math.sqrt(2 * math.pi / N) * series
    return GammaEval(N, l, approx, exact_gamma(N))


def table1(N_list: Sequence[float] = (1, 2, 5, 10), loops: int = 15) -> list[list[GammaEval]]:
    """Rows tree, 1-loop, ..., ``loops``-loop; one column per N."""
    return [[gamma_l_loop(N, l) for N in N_list] for l in range(loops + 1)]


def figure1_data(N_list: Sequence[float] = (1, 2, 5, 10), L_max: int = 14) -> list[tuple[int, list[float]]]:
    """(L, [approx/exact per N]) where L is the highest 1/N power kept (the (L+1)-loop); no tree."""
    return [(L, [gamma_l_loop(N, L + 1).ratio for N in N_list]) for L in range(L_max + 1)]


# ------------------------------------------------------------ truncated series
# Exact power series in x = 1/N, kept as coefficient lists of fixed length.


def _series_mul(a: list, b: list) -> list:
    n = len(a)
    return [sum((a[i] * b[j - i] for i in range(j + 1)), Fraction(0)) for j in range(n)]


def _series_exp(a: list) -> list:
    """exp of a series with zero constant term."""
    if a[0] != 0:
        raise ValueError("constant term must vanish")
    n = len(a)
    # e' = a' e, solved term by term
    out = [Fraction(1)] + [Fraction(0)] * (n - 1)
    for j in range(1, n):
        out[j] = sum((i * a[i] * out[j - i] for i in range(1, j + 1)), Fraction(0)) / j
    return out


def _series_binomial(alpha: Fraction, sign: int, n: int) -> list:
    """(1 + sign x)^alpha truncated to n terms."""
    out = [Fraction(1)]
    for j in range(1, n):
        out.append(out[-1] * (alpha - j + 1) / j * sign)
    return out


def prefactor_series(order: int) -> list[Fraction]:
    """Bracket of the Method II prefactor: exp(sum_j x^j/(j(j+1))) sqrt(1 - x), in x = 1/N.

    It comes from N^N exp(-N f~(t_c)) sqrt(2pi/(N f~''(t_c))) with t_c = 1 - x,
    after the common factor N^N e^-N sqrt(2pi/N) is taken out.
    """
    n = order + 1
    log_part = [Fraction(0)] + [Fraction(1, j * (j + 1)) for j in range(1, n)]
    return _series_mul(_series_exp(log_part), _series_binomial(Fraction(1, 2), -1, n))


def loop_factor_series(order: int) -> list[Fraction]:
    """sum_L c_L(t_c) x^L with c_L(t_c) = n(L) t_c^-L, re-expanded in x."""
    n = order + 1
    # at t_c the jet of f~ is f^(m)(1) t_c^(1-m); the engine sees the t_c = 1 jet
    jet = DerivativeJet(Fraction(1), [Fraction((-1) ** m * math.factorial(m - 1)) for m in range(2, 2 * order + 4)])
    bare = method2_coefficients(jet, order).coeffs
    out = [Fraction(0)] * n
    for L, c in enumerate(bare):
        # x^L (1 - x)^-L
        shifted = [Fraction(0)] * L + _series_binomial(Fraction(-L), -1, n - L)
        for j in range(n):
            out[j] += c * shifted[j]
    return out


@dataclass(frozen=True)
class Method2GammaReport:
    prefactor: list
    loop_factor: list
    combined: list
    expected: list

    @property
    def ok(self) -> bool:
        return self.combined == self.expected

    def mismatches(self) -> list[tuple[int, Fraction, Fraction]]:
        return [(j, c, e) for j, (c, e) in enumerate(zip(self.combined, self.expected)) if c != e]


def method2_gamma_check(L_max: int = 4) -> Method2GammaReport:
    """Compare the 1/N coefficients of prefactor x loop factor with n(L), exactly."""
    pre = prefactor_series(L_max)
    loop = loop_factor_series(L_max)
    combined = _series_mul(pre, loop)
    expected = [n_of_L(L) for L in range(L_max + 1)]
    return Method2GammaReport(pre, loop, combined, expected)


@dataclass(frozen=True)
class EliminationRow:
    N: float
    with_prefactor: float
    without_prefactor: float

    @property
    def rel_diff(self) -> float:
        return abs(self.with_prefactor - self.without_prefactor) / abs(self.with_prefactor)


def g_elimination_check(N_grid: Sequence[float], rel_tol: float = 1e-12) -> list[EliminationRow]:
    """int_0^inf exp(-N(t - ln t)) dt against the same integral with the 1/t prefactor.

    Both equal Gamma(N)/N^N; this is Gamma(N+1) = N Gamma(N) in disguise.
    """
    rows = []
    for N in N_grid:
        a = gamma_by_quadrature(N, rel_tol) / N ** N
        b = gamma_by_quadrature(N, rel_tol, with_prefactor=False) / N ** N
        rows.append(EliminationRow(N, a, b))
    return rows
