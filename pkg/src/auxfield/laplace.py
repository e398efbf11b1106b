"""Arbitrary-order saddle-point expansion of one-dimensional integrals.

For I_N = int dt g(t) exp(-N f(t)) expanded around a stable saddle t_0
(f'(t_0) = 0, f''(t_0) > 0)::

    I_N ~ exp(-N f_0) sqrt(2 pi / (N f_0'')) sum_L c_L / N^L

The coefficients c_L are sums over vertex multisets (see
:mod:`auxfield.combinatorics`) of products of Taylor coefficients of f and g at
the saddle. With ``g`` absent (identically 1) the vertex sums are equality
constrained; otherwise the leftover Gaussian moment is absorbed by a Taylor
coefficient of g (inequality constraint).

The engine is generic over the number type: exact ``Fraction`` jets give exact
coefficients, float jets give float coefficients.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Literal, Optional, Sequence

from .combinatorics import AT_MOST, EXACT, enumerate_multisets
from .exact import double_factorial

Mode = Literal["method-I", "method-II"]


class StabilityError(ValueError):
    """The saddle is not a strict minimum of the exponent (f'' <= 0)."""


class JetArityError(ValueError):
    """The derivative jet is too short for the requested order."""


class OrderExceededError(ValueError):
    """Evaluation asked for more loop orders than the series holds."""


@dataclass(frozen=True)
class DerivativeJet:
    """Values at the saddle: f_0, [f'', f''', ...] and optionally [g, g', g'', ...].

    ``f0`` may be complex when the exponent picks up a log of a negative
    number; only exp(-N f0) is ever used.
    """

    f0: object
    f_derivs: tuple
    g_derivs: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "f_derivs", tuple(self.f_derivs))
        if self.g_derivs is not None:
            object.__setattr__(self, "g_derivs", tuple(self.g_derivs))
        if not self.f_derivs:
            raise JetArityError("jet needs at least the second derivative of f")

    @property
    def f2(self):
        return self.f_derivs[0]

    def f(self, n: int):
        """n-th derivative of f at the saddle, n >= 2."""
        idx = n - 2
        if idx >= len(self.f_derivs):
            raise JetArityError(f"jet lacks f derivative of order {n} (has up to {len(self.f_derivs) + 1})")
        return self.f_derivs[idx]

    def g(self, m: int):
        if self.g_derivs is None:
            return 1 if m == 0 else 0
        if m >= len(self.g_derivs):
            raise JetArityError(f"jet lacks g derivative of order {m} (has up to {len(self.g_derivs) - 1})")
        return self.g_derivs[m]

    def check(self, L_max: int, with_g: bool) -> None:
        f2 = self.f2
        if isinstance(f2, complex) or not f2 > 0:
            raise StabilityError(f"saddle is not stable: f''={f2!r}")
        # k = 1, n_1 = 2L - 1 reaches the highest f derivative
        need_f = 2 * L_max + 2 if L_max > 0 else 2
        self.f(need_f)
        if with_g:
            self.g(2 * L_max)


@dataclass(frozen=True)
class LoopSeries:
    """N-independent loop series; the exp(-N f0) and Gaussian factors are kept symbolic."""

    mode: Mode
    f0: object
    f2: object
    g0: object
    coeffs: tuple = field(default_factory=tuple)

    @property
    def L_max(self) -> int:
        return len(self.coeffs) - 1


def gaussian_moment(p: int) -> int:
    """int x^p exp(-x^2/2) dx / sqrt(2 pi) = (p-1)!! for even p."""
    if p % 2:
        raise ValueError(f"odd Gaussian moment {p} requested; parity bookkeeping is broken")
    return double_factorial(p - 1)


def _over_factorial(x, m: int):
    # keeps integer and rational jets exact
    if isinstance(x, (int, Fraction)):
        return Fraction(x, 1) / factorial(m)
    return x / factorial(m)


def _vertex_weights(jet: DerivativeJet, top: int) -> list:
    # weight of a vertex with label n: f^(n+3) / (n+3)!
    return [_over_factorial(jet.f(n + 3), n + 3) for n in range(top + 1)] if top >= 0 else []


def _multiset_sum(weights: Sequence, k: int, s: int, mode) -> dict:
    """sum over multisets with sum Q = k of prod w_A^Q / prod Q!, grouped by sum Q*A."""
    out: dict[int, object] = {}
    for ms in enumerate_multisets(k, s, mode):
        term = Fraction(1, ms.symmetry_factor())
        for a, q in ms.parts:
            term = term * weights[a] ** q
        out[ms.total] = out.get(ms.total, 0) + term
    return out


def _coefficients(jet: DerivativeJet, L_max: int, with_g: bool) -> list:
    jet.check(L_max, with_g)
    f2 = jet.f2
    weights = _vertex_weights(jet, 2 * L_max - 1)
    g_taylor = [_over_factorial(jet.g(m), m) for m in range(2 * L_max + 1)] if with_g else None
    coeffs = []
    for L in range(L_max + 1):
        c = Fraction(0)
        for k in range(2 * L + 1):
            budget = 2 * L - k
            by_total = _multiset_sum(weights, k, budget, AT_MOST if with_g else EXACT)
            inner = 0
            for total, val in by_total.items():
                if with_g:
                    # leftover power of x is absorbed by g^(m)/m!
                    inner = inner + val * g_taylor[budget - total]
                else:
                    inner = inner + val
            if not by_total:
                continue
            # x power is m + 3k + sum n_j = 2(L + k) in every term
            moment = gaussian_moment(2 * (L + k))
            sign = -1 if k % 2 else 1
            c = c + sign * moment * inner / f2 ** (L + k)
        coeffs.append(c)
    return coeffs


def method1_coefficients(jet: DerivativeJet, L_max: int) -> LoopSeries:
    """Expand with the prefactor g Taylor-expanded at the saddle of f.

    c_L = sum_k (-)^k/k! (2(L+k)-1)!! sum_{sum n_j <= 2L-k} F(n_1..n_k).
    A jet without ``g_derivs`` is treated as g == 1.
    """
    coeffs = _coefficients(jet, L_max, with_g=True)
    return LoopSeries("method-I", jet.f0, jet.f2, jet.g(0), tuple(coeffs))


def method2_coefficients(jet: DerivativeJet, L_max: int) -> LoopSeries:
    """Expand exp(-N f~) alone; vertex sums are equality constrained.

    The jet must not carry g. Any 1/N dependence hidden in the saddle itself
    is left for the caller to re-expand.
    """
    if jet.g_derivs is not None:
        raise ValueError("method-II jets carry no g derivatives; fold ln g into f first")
    coeffs = _coefficients(jet, L_max, with_g=False)
    return LoopSeries("method-II", jet.f0, jet.f2, 1, tuple(coeffs))


def _real_if_close(z):
    if isinstance(z, complex):
        if abs(z.imag) > 1e-9 * max(abs(z.real), 1e-300):
            raise ValueError(f"expansion produced a genuinely complex value {z}")
        return z.real
    return z


def evaluate_l_loop(series: LoopSeries, N: float, l: int) -> float:
    """Tree (l = 0) or l-loop (keeps c_0..c_{l-1}) value of the integral I_N."""
    if l < 0:
        raise ValueError("loop order must be >= 0")
    if l - 1 > series.L_max:
        raise OrderExceededError(f"{l}-loop needs c_0..c_{l - 1}, series holds up to c_{series.L_max}")
    f0 = series.f0
    if isinstance(f0, complex):
        weight = cmath.exp(-N * f0)
    else:
        weight = math.exp(-N * float(f0))
    if l == 0:
        return _real_if_close(weight * float(series.g0))
    total = 0.0
    for L in range(l):
        total += float(series.coeffs[L]) / N ** L
    gauss = math.sqrt(2 * math.pi / (N * float(series.f2)))
    return _real_if_close(weight * gauss * total)
