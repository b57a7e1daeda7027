"""Machine-readable outcome of one theorem check."""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import Any

MAX_WITNESSES = 16


def _jsonable(x: Any) -> Any:
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


@dataclass
class VerificationReport:
    """Result of checking one bound over a family of graphs.

    ``passed`` is derived: a report passes iff it records no violation.
    """

    theorem_id: str
    seed_graph: str
    level: int
    bound: Any = None
    checked: int = 0
    skipped: int = 0
    max_observed: Any = None
    min_observed: Any = None
    witness_sequences: list[str] = field(default_factory=list)
    violations: list[dict] = field(default_factory=list)
    params: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)
    wall_time: float = 0.0
    extreme: str = "max"
    """Which extreme the witness sequences attain: "max" or "min"."""
    _t0: float = field(default_factory=time.perf_counter, repr=False, compare=False)

    @property
    def passed(self) -> bool:
        return not self.violations

    def _target(self):
        return self.max_observed if self.extreme == "max" else self.min_observed

    def observe(self, value, seq_hex: str | None = None) -> None:
        """Track both extremes; sequences attaining ``extreme`` are kept as witnesses."""
        before = self._target()
        if self.max_observed is None or value > self.max_observed:
            self.max_observed = value
        if self.min_observed is None or value < self.min_observed:
            self.min_observed = value
        if seq_hex is None:
            return
        if self._target() != before:
            self.witness_sequences = [seq_hex]
        elif value == before and seq_hex not in self.witness_sequences:
            # keep the smallest few so the result is independent of visit order
            self.witness_sequences = sorted(self.witness_sequences + [seq_hex])[:MAX_WITNESSES]

    def violate(self, seq_hex: str | None, **detail) -> None:
        self.violations.append({"sequence": seq_hex, **detail})

    def count(self, key: str, k: int = 1) -> None:
        self.notes[key] = self.notes.get(key, 0) + k

    def finish(self) -> "VerificationReport":
        self.wall_time = time.perf_counter() - self._t0
        return self

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        """Combine per-worker partial reports of the same check."""
        out = VerificationReport(self.theorem_id, self.seed_graph, self.level, self.bound)
        out.extreme = self.extreme
        out.params = dict(self.params)
        out.checked = self.checked + other.checked
        out.skipped = self.skipped + other.skipped
        out.violations = sorted(
            self.violations + other.violations, key=lambda v: str(v.get("sequence"))
        )
        seen = [r for r in (self, other) if r.max_observed is not None]
        if seen:
            out.max_observed = max(r.max_observed for r in seen)
            out.min_observed = min(r.min_observed for r in seen)
            top = out._target()
            wits = sorted({w for r in seen if r._target() == top for w in r.witness_sequences})
            out.witness_sequences = wits[:MAX_WITNESSES]
        notes = dict(self.notes)
        for k, v in other.notes.items():
            notes[k] = notes[k] + v if isinstance(v, (int, float)) and k in notes else v
        out.notes = notes
        out.wall_time = max(self.wall_time, other.wall_time)
        return out

    def to_json(self) -> dict:
        return _jsonable(
            {
                "theorem_id": self.theorem_id,
                "seed_graph": self.seed_graph,
                "level": self.level,
                "params": self.params,
                "checked": self.checked,
                "passed": self.passed,
                "max_observed": self.max_observed,
                "min_observed": self.min_observed,
                "bound": self.bound,
                "witness_sequences": self.witness_sequences,
                "violations": self.violations,
                "skipped": self.skipped,
                "notes": self.notes,
                "wall_time": round(self.wall_time, 6),
            }
        )

    def dumps(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_json(), indent=indent, sort_keys=False)


REPORT_KEYS = (
    "theorem_id",
    "seed_graph",
    "level",
    "params",
    "checked",
    "passed",
    "max_observed",
    "min_observed",
    "bound",
    "witness_sequences",
    "violations",
    "skipped",
    "notes",
    "wall_time",
)
