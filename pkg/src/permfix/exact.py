"""Exact integer and rational primitives.

Probabilities are :class:`fractions.Fraction` values; floats never enter a
comparison. Decimal strings are produced only by :func:`render_decimal`.
"""

from __future__ import annotations

import math
import threading
from decimal import ROUND_HALF_UP, Decimal, localcontext
from fractions import Fraction

__all__ = [
    "InvalidParams",
    "factorial",
    "binomial",
    "prob_make",
    "render_decimal",
]


class InvalidParams(ValueError):
    """Raised when an (n, k, d) triple or a probability is out of range."""


_fact_table: list[int] = [1]
_fact_lock = threading.Lock()


def factorial(n: int) -> int:
    """Return n! from a memo table that grows on demand."""
    if n < 0:
        raise InvalidParams(f"factorial of negative number {n}")
    table = _fact_table
    if n < len(table):
        return table[n]
    with _fact_lock:
        # another thread may have grown the table while we waited
        while len(table) <= n:
            table.append(table[-1] * len(table))
        return table[n]


def binomial(n: int, k: int) -> int:
    """C(n, k), zero outside 0 <= k <= n."""
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def prob_make(num: int, den: int) -> Fraction:
    """Build a probability num/den in lowest terms, checking 0 <= num <= den."""
    if den == 0:
        raise ZeroDivisionError("probability with zero denominator")
    if den < 0 or num < 0:
        raise InvalidParams(f"negative count in probability {num}/{den}")
    if num > den:
        raise InvalidParams(f"probability {num}/{den} exceeds 1")
    return Fraction(num, den)


def render_decimal(
    value: Fraction | int,
    places: int,
    *,
    leading_zero: bool = True,
    strip: bool = False,
) -> str:
    """Round ``value`` half away from zero to ``places`` decimals.

    ``leading_zero=False`` renders 0.25 as ``.25``; ``strip=True`` drops
    trailing zeros (and the point itself for integers), which is how the
    small-value tables are typeset.
    """
    if places < 0:
        raise InvalidParams("places must be nonnegative")
    value = Fraction(value)
    quantum = Decimal(1).scaleb(-places)
    with localcontext() as ctx:
        ctx.prec = max(50, places + 30)
        exact = Decimal(value.numerator) / Decimal(value.denominator)
        # ROUND_HALF_UP in decimal rounds ties away from zero
        q = exact.quantize(quantum, rounding=ROUND_HALF_UP)
    text = f"{q:f}"
    if strip and "." in text:
        text = text.rstrip("0").rstrip(".")
    if text in ("-0", "-0." + "0" * places):
        text = text[1:]
    if not leading_zero:
        if text.startswith("0."):
            text = text[1:]
        elif text.startswith("-0."):
            text = "-" + text[2:]
    return text
