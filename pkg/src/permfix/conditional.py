"""The conditional probability f(n, k, d).

f(n, k, d) is the probability that point k+1 is fixed given that exactly d of
the points 1..k are fixed, for a uniformly random permutation of [n].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from permfix.counts import Params, _c, partial_derangements
from permfix.exact import InvalidParams, binomial, factorial, prob_make

__all__ = [
    "BoundsTriple",
    "ConsistencyError",
    "cond_fix_prob",
    "cond_fix_prob_incl_excl",
    "closed_form_small_k",
    "f_bounds",
    "last_point_gap",
]


class ConsistencyError(AssertionError):
    """Two evaluation routes that must agree produced different values."""


def _params(n: int, k: int, d: int) -> Params:
    return Params.for_f(n, k, d)


def cond_fix_prob(n: int, k: int, d: int) -> Fraction:
    """f(n, k, d) = c(n-1, k, d) / c(n, k, d).

    The ratio is also computed after shifting out the d known fixed points,
    f(n-d, k-d, 0) = d_{n-d-1, k-d} / d_{n-d, k-d}, and the two must agree.
    """
    _params(n, k, d)
    den = _c(n, k, d)
    if den <= 0:
        raise ConsistencyError(f"c({n},{k},{d}) = {den} is not positive")
    direct = prob_make(_c(n - 1, k, d), den)
    m, kappa = n - d, k - d
    reduced = prob_make(
        partial_derangements(m - 1, kappa), partial_derangements(m, kappa)
    )
    if direct != reduced:
        raise ConsistencyError(f"f({n},{k},{d}): {direct} != {reduced}")
    return direct


def _alt_sum(upper: int, m: int) -> int:
    return sum(
        (-1) ** j * binomial(upper, j) * factorial(m - j) for j in range(upper + 1)
    )


def cond_fix_prob_incl_excl(n: int, k: int, d: int) -> Fraction:
    """f(n, k, d) from the two inclusion-exclusion closed forms.

    One form is 1 - (sum with k-d+1 terms)/(sum with k-d terms); the other is
    a direct ratio with (n-d-j-1)! in the numerator. Both are evaluated and
    must coincide.
    """
    _params(n, k, d)
    m, kappa = n - d, k - d
    den = _alt_sum(kappa, m)
    complement = 1 - Fraction(_alt_sum(kappa + 1, m), den)
    num = sum(
        (-1) ** j * binomial(kappa, j) * factorial(m - j - 1)
        for j in range(kappa + 1)
    )
    ratio = Fraction(num, den)
    if complement != ratio:
        raise ConsistencyError(f"f({n},{k},{d}): {complement} != {ratio}")
    return prob_make(ratio.numerator, ratio.denominator)


def closed_form_small_k(n: int, k: int) -> Fraction:
    """Rational-function form of f(n, k, 0) for k = 0, 1, 2, 3."""
    if not 0 <= k <= 3:
        raise InvalidParams(f"closed form only for 0 <= k <= 3 (got k={k})")
    if n <= k:
        raise InvalidParams(f"closed form needs n > k (n={n}, k={k})")
    if k == 0:
        num, den = 1, n
    elif k == 1:
        num, den = n - 2, (n - 1) ** 2
    elif k == 2:
        num, den = n * n - 5 * n + 7, (n - 2) * (n * n - 3 * n + 3)
    else:
        num = n**3 - 9 * n * n + 29 * n - 34
        den = (n - 3) * (n**3 - 6 * n * n + 14 * n - 13)
    return prob_make(num, den)


@dataclass(frozen=True)
class BoundsTriple:
    """Two-sided bound on f(n, k, d) around 1/m - kappa/(m^2 (m-1)).

    ``upper`` is None when its formula divides by zero (m = 2, kappa > 0).
    ``in_hypothesis`` is False when m = n - d <= 3, where the bound is not
    guaranteed; the values are still returned.
    """

    lower: Fraction
    central: Fraction
    upper: Fraction | None
    in_hypothesis: bool

    def contains(self, value: Fraction) -> bool:
        if value < self.lower:
            return False
        return self.upper is None or value <= self.upper


def f_bounds(n: int, k: int, d: int) -> BoundsTriple:
    _params(n, k, d)
    m, kappa = n - d, k - d
    base = Fraction(1, m)
    if kappa == 0:
        return BoundsTriple(base, base, base, m > 3)
    # kappa >= 1 forces m >= 2
    slope = Fraction(kappa, m * m * (m - 1))
    lower = base - slope * Fraction(m, m - 1)
    upper = None if m == 2 else base - slope * Fraction(m - 3, m - 2)
    return BoundsTriple(lower, base - slope, upper, m > 3)


def last_point_gap(n: int) -> Fraction:
    """|f(n, n-1, 0) - 1/(n+1)|, checked against 1/((n+1) d_{n,n-1})."""
    if n < 2:
        raise InvalidParams(f"n must be >= 2 (got n={n})")
    gap = abs(cond_fix_prob(n, n - 1, 0) - Fraction(1, n + 1))
    closed = Fraction(1, (n + 1) * partial_derangements(n, n - 1))
    if gap != closed:
        raise ConsistencyError(f"gap at n={n}: {gap} != {closed}")
    return gap
