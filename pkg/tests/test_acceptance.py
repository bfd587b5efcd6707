"""Exit criteria. Each test prints one PASS/FAIL line in the terminal summary."""

import time
from fractions import Fraction

import pytest

from permfix import analysis, cli, oracle
from permfix.conditional import f_bounds
from permfix.report import EXCEPTION, VIOLATION

criterion = pytest.mark.criterion

# published values, transcribed as printed
FIGURE_ROWS = [
    ["1.000"],
    ["0.500", "0.000"],
    ["0.333", "0.250", "0.333"],
    ["0.250", "0.222", "0.214", "0.182"],
    ["0.200", "0.188", "0.179", "0.172", "0.170"],
]
P_TABLE = {
    1: ["1", "0"],
    2: ["1", ".5", ".5"],
    3: ["1", ".6666", ".5", ".3333"],
    4: ["1", ".75", ".5833", ".4583", ".375"],
    5: ["1", ".8", ".65", ".5333", ".4417", ".3667"],
    6: ["1", ".8333", ".7", ".5917", ".5203", ".4292", ".3681"],
}
F_TABLE = {
    1: ["1"],
    2: [".5", "0"],
    3: [".3333", ".25", ".3333"],
    4: [".25", ".2222", ".2143", ".1818"],
    5: [".2", ".1875", ".1795", ".1719", ".1698"],
    6: [".1667", ".16", ".1548", ".1502", ".1464", ".1424"],
}


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def _cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    assert code == 0
    return out


def _grid(text):
    """Parse the ascii table back into {n: [cells...]}, dropping trailing blanks."""
    rows = {}
    for line in text.splitlines()[2:]:
        label, *cells = [c.strip() for c in line.split("|")]
        while cells and cells[-1] == "":
            cells.pop()
        rows[int(label)] = cells
    return rows


@criterion("1 Figure-1 triangle, 3 places")
def test_figure_triangle(capsys):
    with Timer() as t:
        out = _cli(capsys, "triangle", "5", "--places", "3")
    rows = [line.split(":", 1)[1].split() for line in out.strip().splitlines()]
    assert rows == FIGURE_ROWS
    # staggering: entry (k, d) sits in column 2k - d of its row
    for line, d in zip(out.strip().splitlines(), range(4, -1, -1)):
        body = line.split(":", 1)[1][1:]
        first = body.index(FIGURE_ROWS[4 - d][0])
        assert first == d * 6  # width 5 + one separator per half-step
    assert t.elapsed < 1


@criterion("2 Table 2 p(n,k,0), 4 places")
def test_table_p(capsys):
    with Timer() as t:
        out = _cli(capsys, "table", "p", "6", "--places", "4")
    got = _grid(out)
    mismatches = [
        (n, k, want, got[n][k] if k < len(got[n]) else None)
        for n, row in P_TABLE.items()
        for k, want in enumerate(row)
        if k >= len(got[n]) or got[n][k] != want
    ]
    assert t.elapsed < 1
    assert mismatches == [], f"cells differing from the printed table: {mismatches}"


@criterion("2 Table 3 f(n,k,0), 4 places")
def test_table_f(capsys):
    with Timer() as t:
        out = _cli(capsys, "table", "f", "6", "--places", "4")
    assert _grid(out) == F_TABLE
    assert t.elapsed < 1


@criterion("3 oracle equivalence n <= 8")
def test_oracle_equivalence():
    with Timer() as t:
        report = oracle.oracle_equivalence_suite(8)
    assert report.violations == []
    ns = {dict(r.params)["n"] for r in report.by_claim("count-oracle")}
    assert ns == set(range(1, 9))
    assert len(report.by_claim("count-partition")) == sum(n + 1 for n in range(1, 9))
    assert t.elapsed < 60


@criterion("4 bijection suite n <= 6")
def test_bijection():
    with Timer() as t:
        assert oracle.psi_forward((7, 2, 1, 5, 8, 6, 4, 3), 4, 5) == (6, 2, 1, 7, 5, 4, 3)
        report = oracle.bijection_suite(6)
    assert report.violations == []
    for claim in ("psi-bijective", "restrict-fixed", "relabel-fixed"):
        assert len(report.by_claim(claim)) == sum(n * n for n in range(2, 7))
    assert len(report.by_claim("rewire-fixed")) == sum(n * (n - 1) for n in range(2, 7))
    assert t.elapsed < 60


IDENTITY_CLAIMS = {
    "partial-step", "last-point", "one-fixed", "f-from-p-ratio", "point-split",
    "p-next-point", "p-ratio-identity", "two-term", "sign-step", "shift-one-fixed",
    "derangement-prob-step",
}


@criterion("5 identity suite n <= 30")
def test_identities():
    with Timer() as t:
        report = analysis.identity_suite(30)
    assert report.violations == []
    present = {r.claim for r in report.records}
    assert IDENTITY_CLAIMS <= present
    for claim in IDENTITY_CLAIMS:
        ns = {dict(r.params)["n"] for r in report.by_claim(claim)}
        assert max(ns) == 30, claim
    assert t.elapsed < 10


@criterion("6 sandwich bounds n - d > 3, n <= 30")
def test_sandwich():
    with Timer() as t:
        b = f_bounds(5, 3, 0)
        assert b.lower == Fraction(13, 80) and b.upper == Fraction(9, 50)
        assert b.lower <= Fraction(11, 64) <= b.upper
        report = analysis.sandwich_suite(30)
    assert report.violations == []
    expected = sum(n - d for n in range(4, 31) for d in range(n - 3))
    assert len(report.records) == expected
    assert t.elapsed < 30


@criterion("7 monotonicity audits to n = 12")
def test_monotonicity():
    with Timer() as t:
        rk = analysis.monotone_in_k(12)
        rn = analysis.monotone_in_n(12)
        rd = analysis.monotone_in_d(12)
    for r in (rk, rn, rd):
        assert [x for x in r.records if x.status == VIOLATION] == []

    def flagged(report):
        return {tuple(v for _, v in r.params) for r in report.records if r.status == EXCEPTION}

    assert flagged(rk) == {
        (n, d, i, j)
        for n in range(1, 13) for d in range(n) for i in range(d, n) for j in range(i + 1, n)
        if n == j + 1 == i + 2 == d + 3
    }
    assert flagged(rn) == {
        (n, k, d, m)
        for n in range(1, 13) for k in range(n) for d in range(k + 1) for m in range(n + 1, 13)
        if n == d + 2 and k == d + 1
    }
    assert flagged(rd) == {
        (n, k, d, c)
        for n in range(1, 13) for k in range(n) for d in range(1, k + 1) for c in range(d)
        if n == k + 1 == d + 2
    }
    rec = [r for r in rk.records if dict(r.params) == {"n": 3, "d": 0, "i": 1, "j": 2}][0]
    assert dict(rec.witness) == {"f_i": Fraction(1, 4), "f_j": Fraction(1, 3)}
    for r in rd.exceptions:
        assert dict(r.witness)["f_d"] == 0
    assert t.elapsed < 60


@criterion("8 last-point gap decay 3 <= n <= 20")
def test_limit():
    with Timer() as t:
        report = analysis.limit_suite(3, 20, small_at=10)
    assert report.violations == []
    assert len(report.by_claim("last-point-gap-decreasing")) == 17
    assert {dict(r.params)["n"] for r in report.by_claim("last-point-gap-small")} == set(range(10, 21))
    assert t.elapsed < 1


@criterion("9 Monte Carlo calibration, n = 5, 1e5 trials/cell")
def test_monte_carlo():
    from permfix.sampler import calibrate_triangle

    with Timer() as t:
        cells = calibrate_triangle(5, 10**5, seed=2024)
        again = calibrate_triangle(5, 10**5, seed=2024)
    assert len(cells) == 15
    outside = [(c.k, c.d, round(c.z, 2)) for c in cells if c.outside]
    assert len(outside) <= 1, outside
    assert [c.estimate for c in cells] == [c.estimate for c in again]
    assert t.elapsed < 30


@criterion("10 p(n,k,d) > p(n,k-1,d) witness with d != 0, n <= 8")
def test_p_witness():
    found = analysis.p_k_increase_witnesses(8)
    assert found
    n, k, d = found[0]
    assert d != 0 and n <= 8
    assert analysis.prob_exact_fixed((n, k, d)) > analysis.prob_exact_fixed((n, k - 1, d))
