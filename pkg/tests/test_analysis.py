from fractions import Fraction

import pytest

from permfix import analysis
from permfix.analysis import (
    d_exception,
    k_exception,
    lemX_equivalence,
    monotone_in_d,
    monotone_in_k,
    monotone_in_n,
    n_exception,
    table_cells,
    table_render,
    triangle,
)
from permfix.exact import InvalidParams, render_decimal
from permfix.report import EXCEPTION, HOLDS


def _find(report, **params):
    hits = [r for r in report.records if dict(r.params) == params]
    assert len(hits) == 1, params
    return hits[0]


def test_triangle_examples():
    tri = triangle(5)
    assert tri.entry(4, 2) == Fraction(1, 3)
    assert render_decimal(tri.entry(4, 2), 3) == "0.333"
    assert tri.entry(4, 3) == 0
    assert [render_decimal(v, 3) for v in tri.row(0)] == [
        "0.200", "0.188", "0.179", "0.172", "0.170"
    ]
    assert len(tri.entries) == 15


def test_triangle_range():
    with pytest.raises(InvalidParams):
        triangle(0)
    with pytest.raises(InvalidParams):
        triangle(31)


def test_triangle_reindex_and_row_start():
    for n in range(1, 21):
        tri = triangle(n)
        for (k, d), v in tri.entries.items():
            assert v == analysis.f(n - d, k - d, 0)
        for d in range(n):
            assert tri.entry(d, d) == Fraction(1, n - d)
    assert analysis.figure_equivalence_suite(12).ok


def test_render_triangle_layout():
    text = analysis.render_triangle(triangle(3), 3)
    assert text.splitlines() == [
        "d=2:             1.000",
        "d=1:       0.500       0.000",
        "d=0: 0.333       0.250       0.333",
    ]


def test_monotone_in_k_examples():
    report = monotone_in_k(5)
    rec = _find(report, n=3, d=0, i=1, j=2)
    assert rec.status == EXCEPTION
    assert dict(rec.witness) == {"f_i": Fraction(1, 4), "f_j": Fraction(1, 3)}
    rec = _find(report, n=5, d=0, i=3, j=4)
    assert rec.status == HOLDS
    assert dict(rec.witness)["f_j"] == Fraction(9, 53)
    assert report.ok


def test_monotone_in_k_shifted_exception():
    report = monotone_in_k(6)
    rec = _find(report, n=6, d=3, i=4, j=5)
    assert rec.status == EXCEPTION
    assert analysis.f(6, 5, 3) > analysis.f(6, 4, 3)


def test_monotone_in_k_exceptions_exactly_predicted():
    report = monotone_in_k(12)
    assert report.ok
    flagged = {tuple(v for _, v in r.params) for r in report.exceptions}
    expected = {(d + 3, d, d + 1, d + 2) for d in range(10)}
    assert flagged == expected
    # equal values at the ends of the n - d = 3 row
    rec = _find(report, n=5, d=2, i=2, j=4)
    assert dict(rec.witness)["f_i"] == dict(rec.witness)["f_j"] == Fraction(1, 3)


def test_monotone_in_n():
    report = monotone_in_n(8)
    assert report.ok
    rec = _find(report, n=2, k=1, d=0, m=4)
    assert rec.status == EXCEPTION
    assert dict(rec.witness) == {"f_n": 0, "f_m": Fraction(2, 9)}
    assert _find(report, n=5, k=0, d=0, m=6).status == HOLDS
    assert _find(report, n=5, k=3, d=0, m=6).status == HOLDS
    for r in report.exceptions:
        p = dict(r.params)
        assert n_exception(p["n"], p["k"], p["d"])


def test_monotone_in_d():
    report = monotone_in_d(8)
    assert report.ok
    assert dict(_find(report, n=5, k=3, d=1, c=0).witness)["f_d"] == Fraction(3, 14)
    rec = _find(report, n=5, k=4, d=3, c=0)
    assert rec.status == EXCEPTION
    assert _find(report, n=5, k=2, d=2, c=1).status == HOLDS
    for r in report.exceptions:
        p = dict(r.params)
        assert d_exception(p["n"], p["k"], p["d"])


def test_lemX():
    report = lemX_equivalence(12)
    assert report.ok
    w = dict(_find(report, n=5, k=3).witness)
    assert w == {"decreasing_in_n": True, "decreasing_in_k": True}
    w = dict(_find(report, n=4, k=1).witness)
    assert w == {"decreasing_in_n": True, "decreasing_in_k": True}


def test_exception_predicates():
    assert k_exception(3, 1, 2, 0) and not k_exception(3, 0, 2, 0)
    assert n_exception(2, 1, 0) and not n_exception(3, 1, 0)
    assert d_exception(5, 4, 3) and not d_exception(5, 3, 3)


def test_sweep_detects_planted_violation(monkeypatch):
    real = analysis.f

    def tampered(n, k, d):
        if (n, k, d) == (7, 4, 0):
            return Fraction(1, 2)
        return real(n, k, d)

    monkeypatch.setattr(analysis, "f", tampered)
    report = monotone_in_k(8)
    assert any(dict(r.params)["n"] == 7 for r in report.violations)


def test_sweeps_are_reproducible():
    a, b = monotone_in_d(9), monotone_in_d(9)
    assert a.to_lines() == b.to_lines()


def test_table_cells():
    p = table_cells("p", 6)
    f = table_cells("f", 6)
    assert f[5, 4] == ".1698"
    assert f[1, 0] == "1"
    assert p[6, 4] == ".5028"  # 362/720
    assert p[1, 1] == "0"
    with pytest.raises(InvalidParams):
        table_cells("q", 6)
    with pytest.raises(InvalidParams):
        table_cells("f", 6, places=0)


def test_table_render_shape():
    text = table_render("f", 6)
    lines = text.splitlines()
    assert len(lines) == 8
    assert ".1424" in lines[-1]
    assert len(table_cells("p", 6, k_max=2)) == sum(min(n, 2) + 1 for n in range(1, 7))


def test_p_witnesses_exist():
    found = analysis.p_k_increase_witnesses(8)
    assert found
    for n, k, d in found:
        assert d >= 1
        assert analysis.prob_exact_fixed((n, k, d)) > analysis.prob_exact_fixed((n, k - 1, d))


def test_sandwich_and_limit_suites():
    assert analysis.sandwich_suite(15).ok
    assert analysis.limit_suite().ok
