"""Check records and reports shared by the suites and the CLI."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

PASS, FAIL, INDETERMINATE = "pass", "fail", "indeterminate"
STATUSES = (PASS, FAIL, INDETERMINATE)

REPORT_SCHEMA = {
    "type": "object",
    "required": ["tool_version", "config", "checks", "summary"],
    "properties": {
        "tool_version": {"type": "string"},
        "config": {"type": "object"},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "status"],
                "properties": {
                    "name": {"type": "string"},
                    "status": {"enum": list(STATUSES)},
                    "witness": {"type": ["string", "null"]},
                    "samples": {"type": "integer"},
                    "mode": {"enum": ["sampled", "exact"]},
                },
            },
        },
        "summary": {
            "type": "object",
            "required": ["pass", "fail", "indeterminate"],
            "properties": {s: {"type": "integer"} for s in STATUSES},
        },
    },
}


@dataclass(frozen=True)
class CheckRecord:
    name: str
    status: str
    samples: int = 0
    witness: Optional[str] = None
    mode: str = "sampled"

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")
        if self.status == FAIL and not self.witness:
            raise ValueError(f"failing check {self.name!r} needs a counterexample")

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"name": self.name, "status": self.status, "samples": self.samples, "mode": self.mode}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass
class CheckReport:
    suite: str
    model: str
    seed: int = 0
    fuel: int = 0
    records: list[CheckRecord] = field(default_factory=list)

    def add(self, record: CheckRecord) -> None:
        self.records.append(record)

    def extend(self, other: "CheckReport") -> None:
        self.records.extend(other.records)

    def ordered(self) -> list[CheckRecord]:
        return sorted(self.records, key=lambda r: r.name)

    def counts(self) -> dict[str, int]:
        out = {s: 0 for s in STATUSES}
        for r in self.records:
            out[r.status] += 1
        return out

    @property
    def ok(self) -> bool:
        return all(r.status != FAIL for r in self.records)

    @property
    def all_pass(self) -> bool:
        return all(r.status == PASS for r in self.records)

    def get(self, name: str) -> CheckRecord:
        for r in self.records:
            if r.name == name:
                return r
        raise KeyError(name)

    def failures(self) -> list[CheckRecord]:
        return [r for r in self.ordered() if r.status == FAIL]

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "model": self.model,
            "seed": self.seed,
            "fuel": self.fuel,
            "checks": [r.to_dict() for r in self.ordered()],
            "summary": self.counts(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def render(self) -> str:
        lines = [f"[{self.suite}] model={self.model} seed={self.seed} fuel={self.fuel}"]
        for r in self.ordered():
            line = f"  {r.status.upper():<13} {r.name} ({r.mode}, n={r.samples})"
            if r.witness:
                line += f" witness: {r.witness}"
            lines.append(line)
        return "\n".join(lines)


def run_check(name: str, items, predicate, describe=str, mode: str = "sampled") -> CheckRecord:
    """Evaluate ``predicate`` on every item; the first failure by index is the witness.

    ``predicate`` returns True, False, or None for an undecided instance.
    """
    count, undecided = 0, None
    for item in items:
        count += 1
        verdict = predicate(item)
        if verdict is False:
            return CheckRecord(name, FAIL, count, describe(item), mode)
        if verdict is None and undecided is None:
            undecided = describe(item)
    if undecided is not None:
        return CheckRecord(name, INDETERMINATE, count, undecided, mode)
    return CheckRecord(name, PASS, count, None, mode)
