"""Monte Carlo cross-check of f(n, k, d) by rejection.

Permutations are drawn uniformly with a batched Fisher-Yates shuffle on a
numpy PCG64 generator; samples outside the conditioning event are discarded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from permfix.conditional import cond_fix_prob
from permfix.counts import Params

GENERATOR = "PCG64"
_CHUNK = 1 << 16


class DegenerateEstimate(ValueError):
    """No sample satisfied the conditioning event."""


@dataclass(frozen=True)
class Estimate:
    point_estimate: float
    standard_error: float
    trials_total: int
    trials_conditioned: int
    hits: int
    seed: int
    generator: str = GENERATOR

    def z_score(self, exact: Fraction) -> float:
        diff = self.point_estimate - float(exact)
        if self.standard_error == 0:
            return 0.0 if diff == 0 else math.copysign(math.inf, diff)
        return diff / self.standard_error


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def sample_permutations(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` independent uniform permutations of 1..n, one per row."""
    if n < 1:
        raise ValueError(f"n must be >= 1 (got n={n})")
    perms = np.tile(np.arange(1, n + 1, dtype=np.int64), (size, 1))
    rows = np.arange(size)
    for i in range(n - 1, 0, -1):
        j = rng.integers(0, i + 1, size=size)
        picked = perms[rows, j]
        perms[rows, j] = perms[:, i]
        perms[:, i] = picked
    return perms


def sample_permutation(n: int, rng: np.random.Generator) -> tuple[int, ...]:
    return tuple(int(x) for x in sample_permutations(n, 1, rng)[0])


def _count(n: int, k: int, d: int, trials: int, rng: np.random.Generator) -> tuple[int, int]:
    points = np.arange(1, n + 1)
    conditioned = hits = 0
    remaining = trials
    while remaining:
        size = min(remaining, _CHUNK)
        remaining -= size
        perms = sample_permutations(n, size, rng)
        fixed = perms == points
        keep = fixed[:, :k].sum(axis=1) == d
        conditioned += int(keep.sum())
        hits += int(fixed[keep, k].sum())
    return conditioned, hits


def estimate_f(
    n: int, k: int, d: int, trials: int, seed: int, workers: int = 1
) -> Estimate:
    """Empirical P(k+1 fixed | exactly d fixed in 1..k) from ``trials`` draws.

    With ``workers > 1`` the trials are split over independent substreams
    spawned from ``seed`` and the counts pooled; the result depends only on
    (n, k, d, trials, seed, workers).
    """
    Params.for_f(n, k, d)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if workers <= 1:
        conditioned, hits = _count(n, k, d, trials, make_rng(seed))
    else:
        children = np.random.SeedSequence(seed).spawn(workers)
        share, extra = divmod(trials, workers)
        conditioned = hits = 0
        for w, child in enumerate(children):
            t = share + (w < extra)
            if t:
                c, h = _count(n, k, d, t, np.random.Generator(np.random.PCG64(child)))
                conditioned += c
                hits += h
    if conditioned == 0:
        raise DegenerateEstimate(
            f"none of {trials} samples had exactly {d} fixed points in 1..{k}"
        )
    p_hat = hits / conditioned
    se = math.sqrt(p_hat * (1 - p_hat) / conditioned)
    return Estimate(p_hat, se, trials, conditioned, hits, seed)


def cell_seed(seed: int, n: int, k: int, d: int) -> int:
    return int(np.random.SeedSequence([seed, n, k, d]).generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class CellCheck:
    k: int
    d: int
    exact: Fraction
    estimate: Estimate

    @property
    def z(self) -> float:
        return self.estimate.z_score(self.exact)

    @property
    def outside(self) -> bool:
        return abs(self.z) > 3


def calibrate_triangle(n: int = 5, trials: int = 10**5, seed: int = 0) -> list[CellCheck]:
    """Estimate every cell of the f(n, ., .) triangle and compare to the exact value."""
    out = []
    for k in range(n):
        for d in range(k + 1):
            est = estimate_f(n, k, d, trials, cell_seed(seed, n, k, d))
            out.append(CellCheck(k, d, cond_fix_prob(n, k, d), est))
    return out
