"""Brute-force ground truth over S_n and the explicit bijection Psi.

Permutations are 1-indexed image tuples: ``alpha[x - 1]`` is alpha(x).
Everything here enumerates; nothing calls the closed-form counts except the
suites, which compare the two.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Iterator, Sequence

from permfix.exact import InvalidParams, factorial
from permfix.report import VerificationReport

Permutation = tuple[int, ...]

MAX_N = 10
HARD_MAX_N = 12


class SizeGuardError(InvalidParams):
    """Enumeration requested beyond the allowed size."""


class EmptyConditionError(ValueError):
    """The conditioning event contains no permutations."""


def _guard(n: int, allow_large: bool = False) -> None:
    if n < 1:
        raise InvalidParams(f"n must be >= 1 (got n={n})")
    limit = HARD_MAX_N if allow_large else MAX_N
    if n > limit:
        raise SizeGuardError(
            f"enumeration of S_{n} refused (limit n <= {limit}"
            + ("" if allow_large else "; pass allow_large to raise it") + ")"
        )


def iter_permutations(n: int, allow_large: bool = False) -> Iterator[Permutation]:
    """All of S_n in lexicographic order, streamed."""
    _guard(n, allow_large)
    return permutations(range(1, n + 1))


def fixed_points(alpha: Sequence[int]) -> set[int]:
    return {x for x, y in enumerate(alpha, 1) if x == y}


def is_permutation(alpha: Sequence[int]) -> bool:
    return sorted(alpha) == list(range(1, len(alpha) + 1))


def _check_kd(n: int, k: int, d: int) -> None:
    if not (0 <= d <= k <= n):
        raise InvalidParams(f"need 0 <= d <= k <= n (n={n}, k={k}, d={d})")


def count_table(n: int, allow_large: bool = False) -> dict[tuple[int, int], int]:
    """|S_{n,k,d}| for every 0 <= d <= k <= n, from a single pass over S_n."""
    table: Counter[tuple[int, int]] = Counter()
    for alpha in iter_permutations(n, allow_large):
        fixed = 0
        table[0, 0] += 1
        for k, y in enumerate(alpha, 1):
            if y == k:
                fixed += 1
            table[k, fixed] += 1
    return {(k, d): table.get((k, d), 0) for k in range(n + 1) for d in range(k + 1)}


def enumerate_count(n: int, k: int, d: int, allow_large: bool = False) -> int:
    """|{alpha in S_n : exactly d fixed points in [k]}| by enumeration."""
    _guard(n, allow_large)
    _check_kd(n, k, d)
    total = 0
    for alpha in iter_permutations(n, allow_large):
        if sum(1 for x in range(k) if alpha[x] == x + 1) == d:
            total += 1
    return total


def conditional_on_subset(
    n: int, A: Iterable[int], a: int, d: int, allow_large: bool = False
) -> Fraction:
    """P(alpha(a) = a | exactly d points of A are fixed), by enumeration."""
    _guard(n, allow_large)
    A = frozenset(A)
    if not A <= set(range(1, n + 1)):
        raise InvalidParams(f"A must be a subset of [1..{n}]")
    if not 1 <= a <= n:
        raise InvalidParams(f"a must lie in [1..{n}]")
    if a in A:
        raise InvalidParams(f"a={a} must not belong to A")
    if not 0 <= d <= len(A):
        raise InvalidParams(f"need 0 <= d <= |A| (d={d}, |A|={len(A)})")
    hits = total = 0
    for alpha in iter_permutations(n, allow_large):
        if sum(1 for x in A if alpha[x - 1] == x) != d:
            continue
        total += 1
        if alpha[a - 1] == a:
            hits += 1
    if total == 0:
        raise EmptyConditionError(f"no permutation of [{n}] has {d} fixed points in A")
    return Fraction(hits, total)


# --- the bijection Psi: B_{n,i,j} -> S_{n-1} -------------------------------


@dataclass(frozen=True)
class PartialMap:
    """Bijection from [n] minus ``domain_excluded`` onto [n] minus ``codomain_excluded``.

    ``images`` keeps length n; the slot of the excluded domain point holds None.
    """

    domain_excluded: int
    codomain_excluded: int
    images: tuple[int | None, ...]

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        if x == self.domain_excluded:
            raise KeyError(x)
        value = self.images[x - 1]
        assert value is not None
        return value

    def is_valid(self) -> bool:
        n, i, j = self.n, self.domain_excluded, self.codomain_excluded
        if self.images[i - 1] is not None:
            return False
        values = [v for x, v in enumerate(self.images, 1) if x != i]
        return sorted(values) == [y for y in range(1, n + 1) if y != j]


def _check_point(p: int, n: int, name: str) -> None:
    if not 1 <= p <= n:
        raise InvalidParams(f"{name}={p} must lie in [1..{n}]")


def psi_restrict(rho: Sequence[int], i: int, j: int) -> PartialMap:
    """Drop point i from rho (which must send i to j)."""
    n = len(rho)
    _check_point(i, n, "i")
    _check_point(j, n, "j")
    if rho[i - 1] != j:
        raise InvalidParams(f"rho({i}) = {rho[i - 1]}, expected {j}")
    images = tuple(None if x == i else y for x, y in enumerate(rho, 1))
    return PartialMap(i, j, images)


def psi_rewire(sigma: PartialMap) -> PartialMap:
    """Send the preimage of i to j instead, so the codomain misses i."""
    i, j = sigma.domain_excluded, sigma.codomain_excluded
    if i == j:
        return sigma
    images = tuple(j if y == i else y for y in sigma.images)
    return PartialMap(i, i, images)


def psi_relabel(sigma: PartialMap) -> Permutation:
    """Close the gap at i in domain and codomain: points above i shift down."""
    i = sigma.domain_excluded
    if sigma.codomain_excluded != i:
        raise InvalidParams("relabeling needs matching excluded points")
    out = []
    for x in range(1, sigma.n):
        y = sigma(x if x < i else x + 1)
        out.append(y if y < i else y - 1)
    return tuple(out)


def psi_forward(rho: Sequence[int], i: int, j: int) -> Permutation:
    """Psi(rho) in S_{n-1} for rho in S_n with rho(i) = j."""
    if len(rho) < 2:
        raise InvalidParams("Psi needs n >= 2")
    return psi_relabel(psi_rewire(psi_restrict(rho, i, j)))


def psi_inverse(alpha: Sequence[int], i: int, j: int) -> Permutation:
    """The unique rho with rho(i) = j and psi_forward(rho, i, j) = alpha."""
    n = len(alpha) + 1
    _check_point(i, n, "i")
    _check_point(j, n, "j")
    if not is_permutation(alpha):
        raise InvalidParams(f"{tuple(alpha)} is not a permutation")
    rho = [0] * n
    for x in range(1, n + 1):
        if x == i:
            continue
        y = alpha[(x if x < i else x - 1) - 1]
        y = y if y < i else y + 1
        if i != j and y == j:
            y = i
        rho[x - 1] = y
    rho[i - 1] = j
    return tuple(rho)


def iter_B(n: int, i: int, j: int, allow_large: bool = False) -> Iterator[Permutation]:
    """Permutations of [n] sending i to j."""
    return (rho for rho in iter_permutations(n, allow_large) if rho[i - 1] == j)


def count_B(n: int, k: int, d: int, i: int, j: int, allow_large: bool = False) -> int:
    """|{rho in S_n : rho(i) = j, exactly d fixed points in [k]}| by enumeration."""
    _guard(n, allow_large)
    _check_kd(n, k, d)
    _check_point(i, n, "i")
    _check_point(j, n, "j")
    return sum(
        1
        for rho in iter_B(n, i, j, allow_large)
        if sum(1 for x in range(k) if rho[x] == x + 1) == d
    )


# --- exhaustive suites -------------------------------------------------------


def bijection_suite(n_max: int = 6) -> VerificationReport:
    """Check Psi and its three component maps on every B_{n,i,j}, 2 <= n <= n_max.

    Claims: ``psi-bijective`` (image is all of S_{n-1}, no collisions, inverse
    round-trips), ``restrict-fixed``, ``rewire-fixed`` and ``relabel-fixed``
    (how each component map moves fixed points).
    """
    report = VerificationReport()
    for n in range(2, n_max + 1):
        target = factorial(n - 1)
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                params = {"n": n, "i": i, "j": j}
                images: set[Permutation] = set()
                size = 0
                bad_inverse = None
                bad = {"restrict": None, "rewire": None, "relabel": None}
                for rho in iter_B(n, i, j):
                    size += 1
                    alpha = psi_forward(rho, i, j)
                    images.add(alpha)
                    if bad_inverse is None and psi_inverse(alpha, i, j) != rho:
                        bad_inverse = rho
                    s1 = psi_restrict(rho, i, j)
                    s2 = psi_rewire(s1)
                    for a in range(1, n + 1):
                        if a == i:
                            ok = (rho[a - 1] == a) == (i == j)
                        else:
                            ok = (rho[a - 1] == a) == (s1(a) == a)
                        if not ok and bad["restrict"] is None:
                            bad["restrict"] = (rho, a)
                        if i != j and a != i and s2(a) == a:
                            if not (s1(a) == a or s1(a) == i):
                                if bad["rewire"] is None:
                                    bad["rewire"] = (rho, a)
                    alpha3 = psi_relabel(s2)
                    for a in range(1, n + 1):
                        if a == i:
                            continue
                        if a < i:
                            ok = (s2(a) == a) == (alpha3[a - 1] == a)
                        else:
                            ok = (s2(a) == a) == (alpha3[a - 2] == a - 1)
                        if not ok and bad["relabel"] is None:
                            bad["relabel"] = (rho, a)
                onto = size == target and len(images) == target and all(
                    is_permutation(a) and len(a) == n - 1 for a in images
                )
                report.check(
                    "psi-bijective",
                    params,
                    onto and bad_inverse is None,
                    domain_size=size,
                    image_size=len(images),
                    bad_inverse=bad_inverse,
                )
                report.check("restrict-fixed", params, bad["restrict"] is None,
                             counterexample=bad["restrict"])
                if i != j:
                    report.check("rewire-fixed", params, bad["rewire"] is None,
                                 counterexample=bad["rewire"])
                report.check("relabel-fixed", params, bad["relabel"] is None,
                             counterexample=bad["relabel"])
    return report


def b_count_suite(n_max: int = 6) -> VerificationReport:
    """|B_{n,k,d,i,j}| against c(n-1,k,d) (k < i,j) and c(n-1,k-1,d) (i <= k < j)."""
    from permfix.counts import _c

    report = VerificationReport()
    for n in range(2, n_max + 1):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                hist: Counter[tuple[int, int]] = Counter()
                for rho in iter_B(n, i, j):
                    fixed = 0
                    for k in range(n):
                        hist[k, fixed] += 1
                        if rho[k] == k + 1:
                            fixed += 1
                for k in range(n):
                    for d in range(k + 1):
                        got = hist[k, d]
                        params = {"n": n, "k": k, "d": d, "i": i, "j": j}
                        if k < i and k < j:
                            want = _c(n - 1, k, d)
                            report.check("B-above-k", params, got == want,
                                         enumerated=got, formula=want)
                        elif i <= k < j and d <= k - 1:
                            want = _c(n - 1, k - 1, d)
                            report.check("B-straddle-k", params, got == want,
                                         enumerated=got, formula=want)
    return report


def oracle_equivalence_suite(n_max: int = 8) -> VerificationReport:
    """Closed-form c(n,k,d) against enumeration, plus the row sums to n!."""
    from permfix.counts import _c

    report = VerificationReport()
    for n in range(1, n_max + 1):
        table = count_table(n, allow_large=n > MAX_N)
        for k in range(n + 1):
            row = 0
            for d in range(k + 1):
                got, want = table[k, d], _c(n, k, d)
                row += want
                report.check("count-oracle", {"n": n, "k": k, "d": d}, got == want,
                             enumerated=got, formula=want)
            report.check("count-partition", {"n": n, "k": k}, row == factorial(n),
                         total=row, factorial=factorial(n))
    return report


def fixed_point_removal_suite(n_max: int = 8) -> VerificationReport:
    """Counts of permutations with d fixed in [k] and x fixed, against c(n-1, ., .)."""
    from permfix.counts import _c

    report = VerificationReport()
    for n in range(2, n_max + 1):
        hist: Counter[tuple[int, int, int]] = Counter()
        for alpha in iter_permutations(n):
            prefix = [0]
            for x in range(n):
                prefix.append(prefix[-1] + (alpha[x] == x + 1))
            for x in range(1, n + 1):
                if alpha[x - 1] == x:
                    for k in range(1, n + 1):
                        hist[x, k, prefix[k]] += 1
        for x in range(1, n + 1):
            for k in range(1, n + 1):
                for d in range(k + 1):
                    got = hist[x, k, d]
                    want = _c(n - 1, k, d) if x > k else _c(n - 1, k - 1, d - 1)
                    report.check("fixed-removal", {"n": n, "x": x, "k": k, "d": d},
                                 got == want, enumerated=got, formula=want)
    return report


def subset_independence_suite(n_max: int = 7) -> VerificationReport:
    """P(a fixed | d fixed in A) depends only on |A|, and equals f(n, |A|, d)."""
    from permfix.conditional import cond_fix_prob

    report = VerificationReport()
    for n in range(2, n_max + 1):
        masks: Counter[int] = Counter()
        for alpha in iter_permutations(n):
            m = 0
            for x, y in enumerate(alpha):
                if x + 1 == y:
                    m |= 1 << x
            masks[m] += 1
        for k in range(n):
            for d in range(k + 1):
                want = cond_fix_prob(n, k, d)
                seen: set[Fraction] = set()
                for A in combinations(range(n), k):
                    amask = sum(1 << x for x in A)
                    for a in range(n):
                        if amask >> a & 1:
                            continue
                        total = hits = 0
                        for m, cnt in masks.items():
                            if bin(m & amask).count("1") == d:
                                total += cnt
                                if m >> a & 1:
                                    hits += cnt
                        seen.add(Fraction(hits, total))
                report.check("subset-independence", {"n": n, "k": k, "d": d},
                             seen == {want}, values=sorted(seen), formula=want)
    return report
