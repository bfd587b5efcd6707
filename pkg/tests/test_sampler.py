from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from permfix import sampler
from permfix.sampler import (
    DegenerateEstimate,
    calibrate_triangle,
    estimate_f,
    make_rng,
    sample_permutation,
    sample_permutations,
)


def test_single_point():
    rng = make_rng(1)
    assert all(sample_permutation(1, rng) == (1,) for _ in range(20))


def test_rows_are_permutations():
    perms = sample_permutations(7, 500, make_rng(2))
    assert (np.sort(perms, axis=1) == np.arange(1, 8)).all()


def test_uniform_over_s3():
    perms = sample_permutations(3, 60_000, make_rng(3))
    counts = Counter(map(tuple, perms.tolist()))
    assert len(counts) == 6
    # multinomial sd = sqrt(60000 * 1/6 * 5/6) ~ 91; 400 is over 4 sd
    for c in counts.values():
        assert abs(c - 10_000) <= 400


def test_deterministic_for_seed():
    a = sample_permutations(6, 100, make_rng(42))
    b = sample_permutations(6, 100, make_rng(42))
    assert (a == b).all()
    assert estimate_f(5, 2, 1, 5_000, 9) == estimate_f(5, 2, 1, 5_000, 9)


def test_estimate_close_to_exact():
    est = estimate_f(5, 3, 0, 10**6, 11)
    assert abs(est.z_score(Fraction(11, 64))) <= 3
    assert est.trials_conditioned <= est.trials_total
    assert 0 <= est.point_estimate <= 1


def test_estimate_exact_cases():
    est = estimate_f(2, 1, 0, 10**4, 5)
    assert est.point_estimate == 0 and est.hits == 0
    assert est.trials_conditioned > 0
    est = estimate_f(1, 0, 0, 100, 5)
    assert est.point_estimate == 1 and est.trials_conditioned == 100


def test_degenerate_signal():
    # 6 fixed points in 1..6 of S_7 has probability 1/5040
    with pytest.raises(DegenerateEstimate):
        estimate_f(7, 6, 6, 10, 0)


def test_standard_error_formula():
    est = estimate_f(4, 1, 0, 20_000, 3)
    p = est.hits / est.trials_conditioned
    assert est.standard_error == pytest.approx((p * (1 - p) / est.trials_conditioned) ** 0.5)


def test_workers_pool_deterministically():
    a = estimate_f(5, 2, 0, 30_001, 7, workers=3)
    b = estimate_f(5, 2, 0, 30_001, 7, workers=3)
    assert a == b
    assert a.trials_total == 30_001
    assert abs(a.z_score(Fraction(7, 39))) < 4


def test_calibration_small():
    cells = calibrate_triangle(4, 20_000, 1)
    assert len(cells) == 10
    assert sum(c.outside for c in cells) <= 1


def test_z_score_zero_se():
    est = sampler.Estimate(0.0, 0.0, 10, 5, 0, 0)
    assert est.z_score(Fraction(0)) == 0
    assert est.z_score(Fraction(1, 2)) == float("-inf")
