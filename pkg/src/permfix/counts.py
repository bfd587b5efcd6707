"""Counts and probabilities of permutations by fixed-point pattern.

Notation: ``c(n, k, d)`` is the number of permutations of ``[n]`` with exactly
``d`` fixed points among ``1..k``; ``p(n, k, d) = c(n, k, d) / n!``;
``d_{n,k} = c(n, k, 0)`` counts k-partial derangements and ``d_n = d_{n,n}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from permfix.exact import InvalidParams, binomial, factorial, prob_make
from permfix.report import VerificationReport

__all__ = [
    "Params",
    "count_exact_fixed",
    "count_flat_sum",
    "partial_derangements",
    "derangements",
    "prob_exact_fixed",
    "prob_via_point_split",
    "recurrence_suite",
]


@dataclass(frozen=True)
class Params:
    """A validated (n, k, d) triple.

    ``conditional=True`` applies the stricter rule k <= n - 1 needed for
    conditional probabilities; otherwise k <= n is allowed.
    """

    n: int
    k: int
    d: int
    conditional: bool = False

    def __post_init__(self) -> None:
        n, k, d = self.n, self.k, self.d
        if n < 1:
            raise InvalidParams(f"n must be >= 1 (got n={n})")
        if k < 0:
            raise InvalidParams(f"k must be >= 0 (got k={k})")
        if d < 0:
            raise InvalidParams(f"d must be >= 0 (got d={d})")
        if d > k:
            raise InvalidParams(f"d exceeds k (d={d}, k={k})")
        if self.conditional:
            if k >= n:
                raise InvalidParams(f"k must be < n for f (k={k}, n={n})")
        elif k > n:
            raise InvalidParams(f"k exceeds n (k={k}, n={n})")

    @classmethod
    def for_f(cls, n: int, k: int, d: int) -> "Params":
        return cls(n, k, d, conditional=True)


def _as_params(params: Params | tuple[int, int, int]) -> Params:
    if isinstance(params, Params):
        return params
    return Params(*params)


def partial_derangements(n: int, k: int) -> int:
    """d_{n,k}: permutations of [n] with no fixed point in [k].

    Evaluated as the inclusion-exclusion sum over j of
    (-1)^j C(k, j) (n - j)!. n = 0 is accepted (d_{0,0} = 1) so that
    recurrences stay valid at their base cases.
    """
    if n < 0 or k < 0 or k > n:
        raise InvalidParams(f"partial derangements need 0 <= k <= n (n={n}, k={k})")
    total = 0
    for j in range(k + 1):
        term = binomial(k, j) * factorial(n - j)
        total += -term if j & 1 else term
    assert total >= 0, (n, k, total)
    return total


def derangements(n: int) -> int:
    """d_n, with d_0 = 1."""
    if n < 0:
        raise InvalidParams(f"n must be >= 0 (got n={n})")
    return partial_derangements(n, n)


def _c(n: int, k: int, d: int) -> int:
    # total version: zero for patterns that cannot occur
    if d < 0 or d > k or k > n or n < 0:
        return 0
    return binomial(k, d) * partial_derangements(n - d, k - d)


def count_exact_fixed(params: Params | tuple[int, int, int]) -> int:
    """c(n, k, d) = C(k, d) * d_{n-d, k-d}."""
    p = _as_params(params)
    return _c(p.n, p.k, p.d)


def count_flat_sum(n: int, k: int, d: int) -> int:
    """c(n, k, d) written out as a single alternating sum (no factoring step)."""
    Params(n, k, d)
    total = 0
    for j in range(k - d + 1):
        total += (-1) ** j * binomial(k - d, j) * factorial(n - d - j) * binomial(k, d)
    return total


def prob_exact_fixed(params: Params | tuple[int, int, int]) -> Fraction:
    """p(n, k, d) = c(n, k, d) / n! in lowest terms."""
    p = _as_params(params)
    return prob_make(_c(p.n, p.k, p.d), factorial(p.n))


def _p(n: int, k: int, d: int) -> Fraction:
    if n == 0:
        return Fraction(1 if (k, d) == (0, 0) else 0)
    return Fraction(_c(n, k, d), factorial(n))


def prob_via_point_split(params: Params | tuple[int, int, int]) -> Fraction:
    """p(n, k, d) split on which point is sent to n.

    Returns (k/n) p(n-1, k-1, d) + (1 - k/n) p(n-1, k, d); needs 0 < k < n.
    """
    p = _as_params(params)
    n, k, d = p.n, p.k, p.d
    if not 0 < k < n:
        raise InvalidParams(f"point split needs 0 < k < n (n={n}, k={k})")
    w = Fraction(k, n)
    return w * _p(n - 1, k - 1, d) + (1 - w) * _p(n - 1, k, d)


def recurrence_suite(n_max: int) -> VerificationReport:
    """Check the derangement recurrences for every n <= n_max.

    Claims recorded (one record per instance):

    * ``partial-step``: d_{n,k} = d_{n,k+1} + d_{n-1,k}, 0 <= k <= n-1
    * ``last-point``: d_{n,n-1} = d_n + d_{n-1}
    * ``one-fixed``: d_n = c(n, n-1, 1)
    * ``two-term``: d_n = (n-1)(d_{n-1} + d_{n-2})
    * ``shift-one-fixed``: (n+1) d_n = c(n+1, n+1, 1)
    * ``sign-step``: d_n = n d_{n-1} + (-1)^n
    """
    if n_max < 2:
        raise InvalidParams("n_max must be >= 2")
    report = VerificationReport()
    D = partial_derangements
    for n in range(1, n_max + 1):
        for k in range(n):
            lhs, rhs = D(n, k), D(n, k + 1) + D(n - 1, k)
            report.check("partial-step", {"n": n, "k": k}, lhs == rhs, lhs=lhs, rhs=rhs)
        lhs, rhs = D(n, n - 1), derangements(n) + derangements(n - 1)
        report.check("last-point", {"n": n}, lhs == rhs, lhs=lhs, rhs=rhs)
        lhs, rhs = derangements(n), n * derangements(n - 1) + (-1) ** n
        report.check("sign-step", {"n": n}, lhs == rhs, lhs=lhs, rhs=rhs)
        lhs, rhs = (n + 1) * derangements(n), _c(n + 1, n + 1, 1)
        report.check("shift-one-fixed", {"n": n}, lhs == rhs, lhs=lhs, rhs=rhs)
        if n >= 2:
            lhs, rhs = derangements(n), _c(n, n - 1, 1)
            report.check("one-fixed", {"n": n}, lhs == rhs, lhs=lhs, rhs=rhs)
            lhs = derangements(n)
            rhs = (n - 1) * (derangements(n - 1) + derangements(n - 2))
            report.check("two-term", {"n": n}, lhs == rhs, lhs=lhs, rhs=rhs)
    return report
