"""Command-line front end: ``permfix <command> ...``.

Exit status: 0 on success (and on a clean ``verify``), 1 when ``verify``
finds a violation, 2 on bad usage or out-of-range parameters.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

from permfix import __version__
from permfix import analysis, oracle
from permfix.conditional import cond_fix_prob
from permfix.counts import Params, count_exact_fixed
from permfix.exact import InvalidParams, render_decimal
from permfix.report import VerificationReport, encode_value
from permfix.sampler import DegenerateEstimate, estimate_f

FORMATS = ("ascii", "csv", "json")
CHECKS = (
    "recurrences",
    "monotone-k",
    "monotone-n",
    "monotone-d",
    "lemx",
    "bounds",
    "oracle",
    "bijection",
)
EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


@dataclass
class OutputDocument:
    format: str
    payload: str
    metadata: dict[str, Any] = field(default_factory=dict)
    exit_code: int = EXIT_OK


def _rational(value: Fraction, places: int) -> dict[str, str]:
    return {
        "num": str(value.numerator),
        "den": str(value.denominator),
        "decimal": render_decimal(value, places, leading_zero=False),
    }


def _json_doc(command: str, params: dict[str, Any], results: list[Any]) -> str:
    doc = {"command": command, "params": params, "results": results, "version": __version__}
    return json.dumps(doc, indent=2)


def _csv(header: Sequence[str], rows: list[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue().rstrip("\n")


def _doc(fmt: str, payload: str, command: str, params: dict[str, Any], code: int = EXIT_OK):
    meta = {"command": command, "params": params, "version": __version__}
    return OutputDocument(fmt, payload, meta, code)


def cmd_count(n: int, k: int, d: int, fmt: str = "ascii") -> OutputDocument:
    value = count_exact_fixed(Params(n, k, d))
    params = {"n": n, "k": k, "d": d}
    if fmt == "json":
        payload = _json_doc("count", params, [{**params, "count": str(value)}])
    elif fmt == "csv":
        payload = _csv(["n", "k", "d", "count"], [[n, k, d, value]])
    else:
        payload = str(value)
    return _doc(fmt, payload, "count", params)


def cmd_cond(n: int, k: int, d: int, places: int = 4, fmt: str = "ascii") -> OutputDocument:
    value = cond_fix_prob(n, k, d)
    params = {"n": n, "k": k, "d": d, "places": places}
    r = _rational(value, places)
    if fmt == "json":
        payload = _json_doc("cond", params, [{"n": n, "k": k, "d": d, "f": r}])
    elif fmt == "csv":
        payload = _csv(["n", "k", "d", "num", "den", "decimal"],
                       [[n, k, d, r["num"], r["den"], r["decimal"]]])
    else:
        payload = f"{r['num']}/{r['den']} ≈ {r['decimal']}"
    return _doc(fmt, payload, "cond", params)


def cmd_triangle(n: int, fmt: str = "ascii", places: int = 3) -> OutputDocument:
    tri = analysis.triangle(n)
    params = {"n": n, "places": places}
    rows = [
        (n, k, d, v.numerator, v.denominator, render_decimal(v, places))
        for (k, d), v in sorted(tri.entries.items(), key=lambda kv: (kv[0][1], kv[0][0]))
    ]
    if fmt == "json":
        results = [
            {"n": n, "k": k, "d": d,
             "f": {"num": str(a), "den": str(b), "decimal": dec}}
            for n, k, d, a, b, dec in rows
        ]
        payload = _json_doc("triangle", params, results)
    elif fmt == "csv":
        payload = _csv(["n", "k", "d", "num", "den", "decimal"], rows)
    else:
        payload = analysis.render_triangle(tri, places)
    return _doc(fmt, payload, "triangle", params)


def cmd_table(
    which: str, n_max: int, places: int = 4, fmt: str = "ascii", k_max: int | None = None
) -> OutputDocument:
    cells = analysis.table_cells(which, n_max, places, k_max)
    params = {"which": which, "n_max": n_max, "places": places, "k_max": k_max}
    if fmt == "ascii":
        payload = analysis.table_render(which, n_max, k_max, places)
    else:
        rows = []
        for (n, k), text in sorted(cells.items()):
            v = analysis.table_value(which, n, k)
            rows.append((n, k, v.numerator, v.denominator, text))
        if fmt == "json":
            results = [
                {"n": n, "k": k, which: {"num": str(a), "den": str(b), "decimal": t}}
                for n, k, a, b, t in rows
            ]
            payload = _json_doc("table", params, results)
        else:
            payload = _csv(["n", "k", "num", "den", "decimal"], rows)
    return _doc(fmt, payload, "table", params)


def _suites(n_max: int, allow_large: bool) -> dict[str, list[Callable[[], VerificationReport]]]:
    oracle_cap = oracle.MAX_N if allow_large else 8
    return {
        "recurrences": [
            lambda: analysis.identity_suite(n_max) if n_max >= 2 else VerificationReport(),
            lambda: analysis.figure_equivalence_suite(min(n_max, 20)),
        ],
        "monotone-k": [lambda: analysis.monotone_in_k(n_max) if n_max >= 2 else VerificationReport()],
        "monotone-n": [lambda: analysis.monotone_in_n(n_max) if n_max >= 3 else VerificationReport()],
        "monotone-d": [lambda: analysis.monotone_in_d(n_max) if n_max >= 3 else VerificationReport()],
        "lemx": [lambda: analysis.lemX_equivalence(n_max) if n_max >= 4 else VerificationReport()],
        "bounds": [
            lambda: analysis.sandwich_suite(n_max),
            lambda: analysis.limit_suite(3, min(n_max, 20)) if n_max >= 3 else VerificationReport(),
        ],
        "oracle": [
            lambda: oracle.oracle_equivalence_suite(min(n_max, oracle_cap)),
            lambda: oracle.fixed_point_removal_suite(min(n_max, 8)),
            lambda: oracle.subset_independence_suite(min(n_max, 7)),
            lambda: oracle.b_count_suite(min(n_max, 6)),
        ],
        "bijection": [lambda: oracle.bijection_suite(min(n_max, 6))],
    }


def run_checks(
    n_max: int, checks: Sequence[str] = CHECKS, allow_large: bool = False
) -> VerificationReport:
    if n_max < 2:
        # nothing nontrivial to check on S_1
        return VerificationReport()
    suites = _suites(n_max, allow_large)
    parts = []
    for name in checks:
        for make in suites[name]:
            parts.append(make())
    return VerificationReport.merge(parts)


def cmd_verify(
    n_max: int,
    checks: Sequence[str] = CHECKS,
    fmt: str = "ascii",
    allow_large: bool = False,
    show_all: bool = False,
) -> OutputDocument:
    unknown = [c for c in checks if c not in CHECKS]
    if unknown:
        raise InvalidParams(f"unknown check(s): {', '.join(unknown)}")
    if n_max < 1:
        raise InvalidParams("--n-max must be >= 1")
    report = run_checks(n_max, checks, allow_large)
    params = {"n_max": n_max, "checks": list(checks)}
    code = EXIT_OK if report.ok else EXIT_VIOLATION
    if fmt == "json":
        doc = {
            "command": "verify",
            "params": params,
            "summary": report.summary(),
            "results": [r.to_dict() for r in report.records],
            "version": __version__,
        }
        payload = json.dumps(doc, indent=2)
    elif fmt == "csv":
        rows = [
            [r.status, r.claim,
             ";".join(f"{k}={v}" for k, v in r.params),
             json.dumps({k: encode_value(v) for k, v in r.witness})]
            for r in report.records
        ]
        payload = _csv(["status", "claim", "params", "witness"], rows)
    else:
        lines = []
        for claim, counts in sorted(report.summary().items()):
            lines.append(
                f"{claim:<28} holds={counts['holds']:<6} "
                f"exception-expected={counts['exception-expected']:<4} "
                f"VIOLATION={counts['VIOLATION']}"
            )
        shown = report.records if show_all else report.exceptions + report.violations
        lines.extend(r.to_line() for r in shown)
        lines.append(
            f"{len(report.records)} records, {len(report.exceptions)} expected exceptions, "
            f"{len(report.violations)} violations"
        )
        payload = "\n".join(lines)
    return _doc(fmt, payload, "verify", params, code)


def cmd_sample(
    n: int, k: int, d: int, trials: int = 100_000, seed: int = 0, fmt: str = "ascii"
) -> OutputDocument:
    est = estimate_f(n, k, d, trials, seed)
    exact = cond_fix_prob(n, k, d)
    z = est.z_score(exact)
    params = {"n": n, "k": k, "d": d, "trials": trials, "seed": seed}
    fields = {
        "estimate": f"{est.point_estimate:.6f}",
        "stderr": f"{est.standard_error:.6f}",
        "conditioned": est.trials_conditioned,
        "exact": f"{exact.numerator}/{exact.denominator}",
        "exact_decimal": render_decimal(exact, 6),
        "z": f"{z:.3f}",
        "generator": est.generator,
    }
    if fmt == "json":
        result = dict(fields, exact=_rational(exact, 6), conditioned=str(est.trials_conditioned))
        payload = _json_doc("sample", params, [result])
    elif fmt == "csv":
        payload = _csv(list(fields), [list(fields.values())])
    else:
        payload = "\n".join(f"{key:<14}{value}" for key, value in fields.items())
    return _doc(fmt, payload, "sample", params)


def _places(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("places must be >= 1")
    return value


def _checks(text: str) -> list[str]:
    items = [c.strip() for c in text.split(",") if c.strip()]
    bad = [c for c in items if c not in CHECKS]
    if bad:
        raise argparse.ArgumentTypeError(
            f"unknown check(s) {', '.join(bad)}; choose from {', '.join(CHECKS)}"
        )
    return items


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="permfix", description="Exact fixed-point statistics of random permutations."
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, places: int | None = None) -> None:
        p.add_argument("--format", choices=FORMATS, default="ascii")
        if places is not None:
            p.add_argument("--places", type=_places, default=places)

    p = sub.add_parser("count", help="c(n,k,d): permutations with d fixed points in 1..k")
    p.add_argument("n", type=int), p.add_argument("k", type=int), p.add_argument("d", type=int)
    common(p)

    p = sub.add_parser("cond", help="f(n,k,d): P(k+1 fixed | d fixed in 1..k)")
    p.add_argument("n", type=int), p.add_argument("k", type=int), p.add_argument("d", type=int)
    common(p, places=4)

    p = sub.add_parser("triangle", help="all f(n,k,d) for one n")
    p.add_argument("n", type=int)
    common(p, places=3)

    p = sub.add_parser("table", help="p(n,k,0) or f(n,k,0) for n up to N")
    p.add_argument("which", choices=("p", "f"))
    p.add_argument("n_max", type=int)
    p.add_argument("--k-max", type=int, default=None)
    common(p, places=4)

    p = sub.add_parser("verify", help="audit identities, bounds and monotonicity claims")
    p.add_argument("--n-max", type=int, default=12)
    p.add_argument("--checks", type=_checks, default=list(CHECKS))
    p.add_argument("--allow-large", action="store_true",
                   help="let the enumeration oracle go up to n = 10")
    p.add_argument("--all", action="store_true", dest="show_all",
                   help="print every record, not just exceptions and violations")
    common(p)

    p = sub.add_parser("sample", help="Monte Carlo estimate of f(n,k,d)")
    p.add_argument("n", type=int), p.add_argument("k", type=int), p.add_argument("d", type=int)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    return parser


def dispatch(args: argparse.Namespace) -> OutputDocument:
    if args.command == "count":
        return cmd_count(args.n, args.k, args.d, args.format)
    if args.command == "cond":
        return cmd_cond(args.n, args.k, args.d, args.places, args.format)
    if args.command == "triangle":
        return cmd_triangle(args.n, args.format, args.places)
    if args.command == "table":
        return cmd_table(args.which, args.n_max, args.places, args.format, args.k_max)
    if args.command == "verify":
        return cmd_verify(args.n_max, args.checks, args.format, args.allow_large, args.show_all)
    if args.command == "sample":
        return cmd_sample(args.n, args.k, args.d, args.trials, args.seed, args.format)
    raise AssertionError(args.command)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = dispatch(args)
    except (InvalidParams, DegenerateEstimate, ValueError) as exc:
        print(f"permfix {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(doc.payload)
    return doc.exit_code


if __name__ == "__main__":
    sys.exit(main())
