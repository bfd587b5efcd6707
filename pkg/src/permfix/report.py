"""Pass/fail records produced by the verification sweeps."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping

from permfix.exact import render_decimal

HOLDS = "holds"
EXCEPTION = "exception-expected"
VIOLATION = "VIOLATION"


def encode_value(value: Any, places: int = 6) -> Any:
    """JSON-safe form of an exact quantity: rationals become num/den strings."""
    if isinstance(value, bool):
        return value
    if isinstance(value, Fraction):
        return {
            "num": str(value.numerator),
            "den": str(value.denominator),
            "decimal": render_decimal(value, places),
        }
    if isinstance(value, int):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [encode_value(v, places) for v in value]
    return value


def _text(value: Any) -> str:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_text(v) for v in value) + "]"
    return str(value)


@dataclass(frozen=True)
class Record:
    claim: str
    params: tuple[tuple[str, int], ...]
    status: str
    witness: tuple[tuple[str, Any], ...] = ()

    def sort_key(self) -> tuple:
        return (self.claim, tuple(v for _, v in self.params))

    def to_line(self) -> str:
        ps = ",".join(f"{k}={v}" for k, v in self.params)
        ws = " ".join(f"{k}={_text(v)}" for k, v in self.witness)
        return f"{self.status}\t{self.claim}\t{ps}\t{ws}".rstrip()

    def to_dict(self) -> dict[str, Any]:
        return {
            "claim": self.claim,
            "params": dict(self.params),
            "status": self.status,
            "witness": {k: encode_value(v) for k, v in self.witness},
        }


@dataclass
class VerificationReport:
    records: list[Record] = field(default_factory=list)

    def add(
        self,
        claim: str,
        params: Mapping[str, int],
        status: str,
        **witness: Any,
    ) -> Record:
        rec = Record(claim, tuple(params.items()), status, tuple(witness.items()))
        self.records.append(rec)
        return rec

    def check(
        self,
        claim: str,
        params: Mapping[str, int],
        ok: bool,
        *,
        exception: bool = False,
        **witness: Any,
    ) -> Record:
        """Record one instance: ``ok`` is whether the expected relation held.

        With ``exception=True`` the expected relation is the reversed one
        from the claim's exception set, and a pass is tagged accordingly.
        """
        if not ok:
            status = VIOLATION
        elif exception:
            status = EXCEPTION
        else:
            status = HOLDS
        return self.add(claim, params, status, **witness)

    def extend(self, other: "VerificationReport") -> None:
        self.records.extend(other.records)

    @classmethod
    def merge(cls, reports: Iterable["VerificationReport"]) -> "VerificationReport":
        merged = cls()
        for r in reports:
            merged.extend(r)
        merged.records.sort(key=Record.sort_key)
        return merged

    @property
    def violations(self) -> list[Record]:
        return [r for r in self.records if r.status == VIOLATION]

    @property
    def exceptions(self) -> list[Record]:
        return [r for r in self.records if r.status == EXCEPTION]

    @property
    def ok(self) -> bool:
        return not self.violations

    def by_claim(self, claim: str) -> list[Record]:
        return [r for r in self.records if r.claim == claim]

    def summary(self) -> dict[str, dict[str, int]]:
        out: dict[str, dict[str, int]] = {}
        for r in self.records:
            counts = out.setdefault(r.claim, {HOLDS: 0, EXCEPTION: 0, VIOLATION: 0})
            counts[r.status] += 1
        return out

    def to_lines(self) -> list[str]:
        return [r.to_line() for r in self.records]

    def to_json(self) -> str:
        return json.dumps([r.to_dict() for r in self.records], indent=2)
