"""Theorem audits over finite parameter ranges.

Every status in the returned reports comes from comparing exact rationals.
Exception sets are predicates on the parameters, so sweeps to any ``n_max``
classify tuples they have never seen before.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from permfix.conditional import (
    closed_form_small_k,
    cond_fix_prob,
    cond_fix_prob_incl_excl,
    f_bounds,
    last_point_gap,
)
from permfix.counts import (
    _p,
    count_exact_fixed,
    count_flat_sum,
    prob_exact_fixed,
    prob_via_point_split,
    recurrence_suite,
)
from permfix.exact import InvalidParams, factorial, render_decimal
from permfix.report import VerificationReport

TRIANGLE_MAX_N = 30


@lru_cache(maxsize=None)
def f(n: int, k: int, d: int) -> Fraction:
    return cond_fix_prob(n, k, d)


def p0(n: int, k: int) -> Fraction:
    return _p(n, k, 0)


# --- triangle and tables -----------------------------------------------------


@dataclass(frozen=True)
class Triangle:
    """All f(n, k, d) for 0 <= d <= k <= n - 1 at a fixed n."""

    n: int
    entries: dict[tuple[int, int], Fraction]

    def entry(self, k: int, d: int) -> Fraction:
        return self.entries[k, d]

    def row(self, d: int) -> list[Fraction]:
        """Entries with d fixed points, in increasing k."""
        return [self.entries[k, d] for k in range(d, self.n)]

    def rows_top_down(self) -> list[tuple[int, list[Fraction]]]:
        return [(d, self.row(d)) for d in range(self.n - 1, -1, -1)]


def triangle(n: int) -> Triangle:
    if not 1 <= n <= TRIANGLE_MAX_N:
        raise InvalidParams(f"triangle needs 1 <= n <= {TRIANGLE_MAX_N} (got n={n})")
    entries = {(k, d): f(n, k, d) for k in range(n) for d in range(k + 1)}
    return Triangle(n, entries)


def render_triangle(tri: Triangle, places: int = 3) -> str:
    """Text triangle: one line per d, highest d on top, staggered like a pyramid."""
    cells = {key: render_decimal(v, places) for key, v in tri.entries.items()}
    width = max(len(c) for c in cells.values())
    label_w = len(f"d={tri.n - 1}:")
    lines = []
    for d, _ in tri.rows_top_down():
        # column index of entry (k, d) in a grid of 2n-1 slots
        slots = [" " * width] * (2 * tri.n - 1)
        for k in range(d, tri.n):
            slots[2 * k - d] = cells[k, d].rjust(width)
        lines.append(f"{f'd={d}:':<{label_w}} " + " ".join(slots).rstrip())
    return "\n".join(lines)


def table_value(which: str, n: int, k: int) -> Fraction:
    if which == "p":
        return prob_exact_fixed((n, k, 0))
    if which == "f":
        return f(n, k, 0)
    raise InvalidParams(f"table must be 'p' or 'f' (got {which!r})")


def table_cells(
    which: str, n_max: int, places: int = 4, k_max: int | None = None
) -> dict[tuple[int, int], str]:
    """Rendered cells keyed by (n, k); d = 0 throughout."""
    if which not in ("p", "f"):
        raise InvalidParams(f"table must be 'p' or 'f' (got {which!r})")
    if not 1 <= n_max <= TRIANGLE_MAX_N:
        raise InvalidParams(f"n_max must be in 1..{TRIANGLE_MAX_N}")
    if places < 1:
        raise InvalidParams("places must be >= 1")
    out = {}
    for n in range(1, n_max + 1):
        top = n if which == "p" else n - 1
        if k_max is not None:
            top = min(top, k_max)
        for k in range(top + 1):
            out[n, k] = render_decimal(
                table_value(which, n, k), places, leading_zero=False, strip=True
            )
    return out


def table_render(
    which: str, n_max: int, k_max: int | None = None, places: int = 4
) -> str:
    """Grid of p(n, k, 0) or f(n, k, 0), rows n and columns k."""
    cells = table_cells(which, n_max, places, k_max)
    ks = sorted({k for _, k in cells})
    width = max([len(c) for c in cells.values()] + [len(str(k)) for k in ks])
    head = "n\\k".ljust(4) + "|" + "|".join(str(k).center(width + 2) for k in ks)
    lines = [head, "-" * len(head)]
    for n in range(1, n_max + 1):
        row = [cells.get((n, k), "").center(width + 2) for k in ks]
        lines.append(str(n).ljust(4) + "|" + "|".join(row).rstrip())
    return "\n".join(lines)


# --- monotonicity ------------------------------------------------------------


def k_exception(n: int, i: int, j: int, d: int) -> bool:
    return n == j + 1 == i + 2 == d + 3


def n_exception(n: int, k: int, d: int) -> bool:
    return n == d + 2 and k == d + 1


def d_exception(n: int, k: int, d: int) -> bool:
    return n == k + 1 == d + 2


def monotone_in_k(n_max: int) -> VerificationReport:
    """f(n, j, d) < f(n, i, d) for d <= i < j < n, checked on every pair.

    On the exception set the reverse strict inequality is required. When
    n - d = 3 outside the exception set only f(n, j, d) <= f(n, i, d) is
    claimed (f(n, d+2, d) = f(n, d, d) = 1/3 there).
    """
    if n_max < 2:
        raise InvalidParams("n_max must be >= 2")
    report = VerificationReport()
    for n in range(1, n_max + 1):
        for d in range(n):
            for i in range(d, n):
                for j in range(i + 1, n):
                    fi, fj = f(n, i, d), f(n, j, d)
                    params = {"n": n, "d": d, "i": i, "j": j}
                    if k_exception(n, i, j, d):
                        report.check("decreasing-in-k", params, fj > fi,
                                     exception=True, f_i=fi, f_j=fj)
                    elif n - d == 3:
                        report.check("decreasing-in-k", params, fj <= fi,
                                     f_i=fi, f_j=fj, relation="non-strict")
                    else:
                        report.check("decreasing-in-k", params, fj < fi,
                                     f_i=fi, f_j=fj)
    return report


def monotone_in_n(n_max: int) -> VerificationReport:
    """f(m, k, d) < f(n, k, d) for m > n > k >= d, except n = d+2, k = d+1."""
    if n_max < 3:
        raise InvalidParams("n_max must be >= 3")
    report = VerificationReport()
    for n in range(1, n_max + 1):
        for k in range(n):
            for d in range(k + 1):
                fn = f(n, k, d)
                exc = n_exception(n, k, d)
                for m in range(n + 1, n_max + 1):
                    fm = f(m, k, d)
                    params = {"n": n, "k": k, "d": d, "m": m}
                    if exc:
                        report.check("decreasing-in-n", params, fm > fn and fn == 0,
                                     exception=True, f_n=fn, f_m=fm)
                    else:
                        report.check("decreasing-in-n", params, fm < fn,
                                     f_n=fn, f_m=fm)
    return report


def monotone_in_d(n_max: int) -> VerificationReport:
    """f(n, k, d) > f(n, k, c) for c < d <= k < n, except n = k+1 = d+2."""
    if n_max < 3:
        raise InvalidParams("n_max must be >= 3")
    report = VerificationReport()
    for n in range(1, n_max + 1):
        for k in range(n):
            for d in range(1, k + 1):
                fd = f(n, k, d)
                exc = d_exception(n, k, d)
                for c in range(d):
                    fc = f(n, k, c)
                    params = {"n": n, "k": k, "d": d, "c": c}
                    if exc:
                        report.check("increasing-in-d", params, fd < fc and fd == 0,
                                     exception=True, f_d=fd, f_c=fc)
                    else:
                        report.check("increasing-in-d", params, fd > fc,
                                     f_d=fd, f_c=fc)
    return report


def lemX_equivalence(n_max: int) -> VerificationReport:
    """[f(n,k-1,0) < f(n-1,k-1,0)] iff [f(n,k,0) < f(n,k-1,0)], 3 < n, 0 < k < n."""
    if n_max < 4:
        raise InvalidParams("n_max must be >= 4")
    report = VerificationReport()
    for n in range(4, n_max + 1):
        for k in range(1, n):
            in_n = f(n, k - 1, 0) < f(n - 1, k - 1, 0)
            in_k = f(n, k, 0) < f(n, k - 1, 0)
            report.check("n-step-iff-k-step", {"n": n, "k": k}, in_n == in_k,
                         decreasing_in_n=in_n, decreasing_in_k=in_k)
    return report


# --- identities, bounds, limits ---------------------------------------------


def identity_suite(n_max: int = 30) -> VerificationReport:
    """Exact identities and inequalities for p and f with d = 0 (and some d > 0).

    Runs :func:`permfix.counts.recurrence_suite` and adds the probability
    identities, the monotonicity facts for p(n, k, 0), the shift recursion
    f(n,k,d) = f(n-a,k-a,d-a), and the agreement of all f routes.
    """
    report = recurrence_suite(max(n_max, 2))
    for n in range(1, n_max + 1):
        inv_n = Fraction(1, n)
        for k in range(n + 1):
            for d in range(k + 1):
                flat = count_flat_sum(n, k, d)
                factored = count_exact_fixed((n, k, d))
                report.check("flat-sum", {"n": n, "k": k, "d": d}, flat == factored,
                             flat=flat, factored=factored)
            if k > 0:
                report.check("p-nonincreasing-in-k", {"n": n, "k": k},
                             p0(n, k) <= p0(n, k - 1), p_k=p0(n, k), p_prev=p0(n, k - 1))
        for k in range(n):
            params = {"n": n, "k": k}
            lhs = f(n, k, 0)
            rhs = 1 - p0(n, k + 1) / p0(n, k)
            report.check("f-from-p-ratio", params, lhs == rhs, lhs=lhs, rhs=rhs)
            lhs = p0(n, k + 1)
            rhs = p0(n, k) - inv_n * p0(n - 1, k)
            report.check("p-next-point", params, lhs == rhs, lhs=lhs, rhs=rhs)
            report.check("p-nondecreasing-in-n", params, p0(n - 1, k) <= p0(n, k),
                         p_prev=p0(n - 1, k), p=p0(n, k))
            report.check("f-at-most-1/n", params, f(n, k, 0) <= inv_n, f=f(n, k, 0))
            if k == 0:
                continue
            report.check("p-below-shifted", params, p0(n, k) <= p0(n - 1, k - 1),
                         p=p0(n, k), p_shift=p0(n - 1, k - 1))
            ratio = p0(n, k + 1) / p0(n, k)
            report.check("p-ratio-floor", params, ratio >= 1 - inv_n, ratio=ratio)
            if n >= 3:
                rhs = 1 - inv_n + Fraction(k, n * n * (n - 1)) * p0(n - 2, k - 1) / p0(n, k)
                report.check("p-ratio-identity", params, ratio == rhs, lhs=ratio, rhs=rhs)
            for d in range(k + 1):
                lhs = prob_via_point_split((n, k, d))
                rhs = prob_exact_fixed((n, k, d))
                report.check("point-split", {"n": n, "k": k, "d": d}, lhs == rhs,
                             lhs=lhs, rhs=rhs)
        if n >= 2:
            lhs = p0(n, n) - p0(n - 1, n - 1)
            rhs = Fraction((-1) ** n, factorial(n))
            report.check("derangement-prob-step", {"n": n}, lhs == rhs, lhs=lhs, rhs=rhs)
    for n in range(1, min(n_max, 12) + 1):
        for k in range(n):
            for d in range(k + 1):
                value = f(n, k, d)
                params = {"n": n, "k": k, "d": d}
                routes_ok = cond_fix_prob_incl_excl(n, k, d) == value
                if d == 0 and k <= 3:
                    routes_ok = routes_ok and closed_form_small_k(n, k) == value
                report.check("f-routes-agree", params, routes_ok, f=value)
                shifted = [f(n - a, k - a, d - a) for a in range(d + 1)]
                report.check("f-shift", params, all(v == value for v in shifted),
                             values=shifted)
    witnesses = p_k_increase_witnesses(min(n_max, 8))
    report.check("p-k-monotone-fails-for-d>0", {"n_max": min(n_max, 8)},
                 bool(witnesses), count=len(witnesses),
                 first=witnesses[0] if witnesses else None)
    return report


def p_k_increase_witnesses(n_max: int = 8) -> list[tuple[int, int, int]]:
    """All (n, k, d), d >= 1, with p(n, k, d) > p(n, k-1, d) (both in range)."""
    found = []
    for n in range(1, n_max + 1):
        for k in range(2, n + 1):
            for d in range(1, k):
                if prob_exact_fixed((n, k, d)) > prob_exact_fixed((n, k - 1, d)):
                    found.append((n, k, d))
    return found


def sandwich_suite(n_max: int = 30) -> VerificationReport:
    """lower <= f(n, k, d) <= upper wherever n - d > 3."""
    report = VerificationReport()
    for n in range(4, n_max + 1):
        for d in range(n - 3):
            for k in range(d, n):
                b = f_bounds(n, k, d)
                value = f(n, k, d)
                report.check("sandwich", {"n": n, "k": k, "d": d}, b.contains(value),
                             lower=b.lower, f=value, upper=b.upper)
    return report


def limit_suite(n_lo: int = 3, n_hi: int = 20, small_at: int = 10) -> VerificationReport:
    """|f(n,n-1,0) - 1/(n+1)| strictly decreases and is < 1e-6 from ``small_at`` on."""
    report = VerificationReport()
    prev = None
    for n in range(n_lo, n_hi + 1):
        gap = last_point_gap(n)
        if prev is not None:
            report.check("last-point-gap-decreasing", {"n": n}, gap < prev,
                         gap=gap, previous=prev)
        if n >= small_at:
            report.check("last-point-gap-small", {"n": n},
                         gap < Fraction(1, 10**6), gap=gap)
        prev = gap
    return report


def figure_equivalence_suite(n_max: int = 20) -> VerificationReport:
    """Triangle entries against their d = 0 reindexing and the 1/(n-d) row start."""
    report = VerificationReport()
    for n in range(1, n_max + 1):
        tri = triangle(n)
        for (k, d), value in tri.entries.items():
            params = {"n": n, "k": k, "d": d}
            report.check("triangle-reindex", params, value == f(n - d, k - d, 0),
                         f=value)
            if k == d:
                report.check("row-start", params, value == Fraction(1, n - d), f=value)
    return report
