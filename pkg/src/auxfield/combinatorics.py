"""Constrained multisets and the T(L, k | s) coefficients.

A vertex configuration with k cubic-or-higher vertices is labelled by a tuple
(n_1, ..., n_k) of non-negative integers. Since every summand we need is a
symmetric function of the n_j, the tuples are grouped into multisets
{(A_1, Q_1), ..., (A_P, Q_P)}: the value A_a occurs Q_a times, A_1 < ... < A_P.
The constraint on the tuple sum becomes sum Q_a = k and sum Q_a A_a = s
(``exact``) or <= s (``at_most``).
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterator, Literal

from .exact import double_factorial, format_rational

Mode = Literal["exact", "at_most"]
EXACT: Mode = "exact"
AT_MOST: Mode = "at_most"


@dataclass(frozen=True)
class ConstrainedMultiset:
    parts: tuple[tuple[int, int], ...]
    size: int = field(init=False)
    total: int = field(init=False)

    def __post_init__(self):
        prev = -1
        for a, q in self.parts:
            if a <= prev or a < 0:
                raise ValueError(f"A values must be strictly increasing and >= 0: {self.parts}")
            if q < 1:
                raise ValueError(f"multiplicities must be >= 1: {self.parts}")
            prev = a
        object.__setattr__(self, "size", sum(q for _, q in self.parts))
        object.__setattr__(self, "total", sum(a * q for a, q in self.parts))

    @property
    def values(self) -> tuple[int, ...]:
        """The distinct A values, ascending."""
        return tuple(a for a, _ in self.parts)

    def expanded(self) -> tuple[int, ...]:
        """The sorted n-tuple this multiset stands for."""
        return tuple(a for a, q in self.parts for _ in range(q))

    def symmetry_factor(self) -> int:
        """Q_1! Q_2! ... Q_P!"""
        out = 1
        for _, q in self.parts:
            out *= factorial(q)
        return out

    @classmethod
    def from_tuple(cls, ns) -> "ConstrainedMultiset":
        counts: dict[int, int] = {}
        for n in ns:
            counts[n] = counts.get(n, 0) + 1
        return cls(tuple(sorted(counts.items())))


def _descend(k: int, budget: int, lowest: int, exact: bool) -> Iterator[tuple[tuple[int, int], ...]]:
    # k parts still to place, each >= lowest, summing to budget (or <= budget).
    if k == 0:
        if budget == 0 or not exact:
            yield ()
        return
    a = lowest
    # the k remaining parts are all >= a
    while k * a <= budget:
        # the k - q parts after this one are all >= a + 1: q*a + (k-q)(a+1) <= budget
        for q in range(max(1, k * (a + 1) - budget), k + 1):
            rest = k - q
            for tail in _descend(rest, budget - q * a, a + 1, exact):
                yield ((a, q),) + tail
        a += 1


@lru_cache(maxsize=None)
def _multisets(k: int, s: int, mode: Mode) -> tuple[ConstrainedMultiset, ...]:
    if s < 0:
        return ()
    found = [ConstrainedMultiset(p) for p in _descend(k, s, 0, mode == EXACT)]
    found.sort(key=lambda m: m.expanded())
    return tuple(found)


def enumerate_multisets(k: int, s: int, mode: Mode = EXACT) -> list[ConstrainedMultiset]:
    """All multisets of k non-negative integers whose sum is s (or at most s).

    Ordered lexicographically by their sorted element sequence.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if mode not in (EXACT, AT_MOST):
        raise ValueError(f"unknown mode {mode!r}")
    return list(_multisets(k, s, mode))


def enumerate_tuples(k: int, s: int, mode: Mode = EXACT) -> Iterator[tuple[int, ...]]:
    """Brute-force ordered tuples (n_1..n_k); the oracle for the multiset path."""
    if s < 0:
        return
    for ns in itertools.product(range(s + 1), repeat=k):
        tot = sum(ns)
        if tot == s or (mode == AT_MOST and tot < s):
            yield ns


@lru_cache(maxsize=None)
def t_coefficient(L: int, k: int, s: int, mode: Mode = EXACT) -> Fraction:
    """T(L, k | s) = (-)^k (2(L+k)-1)!! * sum over multisets of 1/(prod Q! prod (A+3)^Q).

    In exact mode with k = 0 only s = 0 is hit by the empty multiset, so
    T(L, 0 | 2L) = 0 for L > 0; in at-most mode T(L, 0 | <= s) = (2L-1)!!.
    """
    if L < 0 or k < 0:
        raise ValueError("L and k must be >= 0")
    acc = Fraction(0)
    for ms in _multisets(k, s, mode):
        den = ms.symmetry_factor()
        for a, q in ms.parts:
            den *= (a + 3) ** q
        acc += Fraction(1, den)
    if not acc:
        return acc
    sign = -1 if k % 2 else 1
    return sign * double_factorial(2 * (L + k) - 1) * acc


def t_coefficient_by_tuples(L: int, k: int, s: int, mode: Mode = EXACT) -> Fraction:
    """Same value as :func:`t_coefficient`, summed over raw tuples and divided by k!."""
    acc = Fraction(0)
    for ns in enumerate_tuples(k, s, mode):
        den = 1
        for n in ns:
            den *= n + 3
        acc += Fraction(1, den)
    sign = -1 if k % 2 else 1
    return sign * double_factorial(2 * (L + k) - 1) * acc / factorial(k)


def normalized_t(L: int, k: int) -> Fraction:
    """T(L, k | 2L-k) / (2(L+k)-1)!!, the normalized table entry."""
    return t_coefficient(L, k, 2 * L - k) / double_factorial(2 * (L + k) - 1)


def n_of_L(L: int) -> Fraction:
    """n(L) = sum_k T(L, k | 2L-k): the 1/N^L Stirling coefficient."""
    return sum((t_coefficient(L, k, 2 * L - k) for k in range(2 * L + 1)), Fraction(0))


@dataclass
class IdentityCheck:
    name: str
    L: int
    K: int | None
    lhs: Fraction
    rhs: Fraction

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs

    def describe(self) -> str:
        where = f"L={self.L}" + (f" K={self.K}" if self.K is not None else "")
        status = "PASS" if self.ok else "FAIL"
        return (f"{status} {self.name} {where}: "
                f"lhs={format_rational(self.lhs)} rhs={format_rational(self.rhs)}")


def verify_appendix_b(L_max: int) -> list[IdentityCheck]:
    """Check the inequality/equality sum identity and the shift lemma for 1 <= L <= L_max.

    (a) sum_k T(L,k|<=2L-k) == sum_k T(L,k|2L-k)
    (b) T(L,K+1|2L-K-2) == -T(L,K|<=2L-K-2) for 1 <= K <= 2L-2
    """
    if L_max < 1:
        raise ValueError("L_max must be >= 1")
    checks: list[IdentityCheck] = []
    for L in range(1, L_max + 1):
        lhs = sum((t_coefficient(L, k, 2 * L - k, AT_MOST) for k in range(2 * L + 1)), Fraction(0))
        checks.append(IdentityCheck("inequality-equals-equality", L, None, lhs, n_of_L(L)))
        for K in range(1, 2 * L - 1):
            s = 2 * L - K - 2
            checks.append(IdentityCheck(
                "shift-lemma", L, K,
                t_coefficient(L, K + 1, s, EXACT),
                -t_coefficient(L, K, s, AT_MOST),
            ))
    return checks


def t_table_rows(L_max: int) -> list[tuple[int, int, Fraction, Fraction]]:
    """(L, k, T/(2(L+k)-1)!!, T) for 0 <= L <= L_max, 0 <= k <= 2L; L then k ascending."""
    rows = []
    for L in range(L_max + 1):
        for k in range(2 * L + 1):
            t = t_coefficient(L, k, 2 * L - k)
            rows.append((L, k, t / double_factorial(2 * (L + k) - 1), t))
    return rows


def t_table_csv(L_max: int, normalized: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if normalized:
        w.writerow(["L", "k", "T_over_dfact", "T"])
    else:
        w.writerow(["L", "k", "T"])
    for L, k, norm, t in t_table_rows(L_max):
        if normalized:
            w.writerow([L, k, format_rational(norm), format_rational(t)])
        else:
            w.writerow([L, k, format_rational(t)])
    return buf.getvalue()
