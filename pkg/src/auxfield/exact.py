"""Exact integer and rational primitives.

Python integers are already arbitrary precision and :class:`fractions.Fraction`
keeps values reduced with a positive denominator, so this module only adds the
combinatorial helpers and the textual ``p/q`` format used by every table.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

Rational = Fraction

__all__ = [
    "Rational",
    "rational",
    "double_factorial",
    "factorial",
    "multinomial",
    "format_rational",
    "parse_rational",
]


def rational(num: int, den: int = 1) -> Fraction:
    """Build a reduced rational ``num/den``.

    Raises ZeroDivisionError when ``den`` is zero.
    """
    if den == 0:
        raise ZeroDivisionError(f"rational({num}, 0): zero denominator")
    return Fraction(num, den)


@lru_cache(maxsize=None)
def double_factorial(n: int) -> int:
    """n!! = n (n-2) (n-4) ..., with (-1)!! = 0!! = 1."""
    if n < -1:
        raise ValueError(f"double factorial undefined for n={n} < -1")
    if n <= 0:
        return 1
    return n * double_factorial(n - 2)


def factorial(n: int) -> int:
    return math.factorial(n)


def multinomial(multiplicities: Iterable[int]) -> int:
    """k! / (Q_1! ... Q_P!) with k = sum of the multiplicities."""
    qs = list(multiplicities)
    out = math.factorial(sum(qs))
    for q in qs:
        out //= math.factorial(q)
    return out


def format_rational(value: Fraction | int) -> str:
    """Render as ``p/q`` (or ``p`` for integers), minus sign leading, no spaces."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text or " " in text:
        raise ValueError(f"malformed rational {text!r}")
    num, sep, den = text.partition("/")
    if sep and not den:
        raise ValueError(f"malformed rational {text!r}")
    return rational(int(num), int(den) if sep else 1)
