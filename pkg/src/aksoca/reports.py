"""Check reports shared by every ``check_*`` routine."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

import numpy as np

MAX_WITNESSES = 5


@dataclass
class CheckReport:
    """Outcome of one universally quantified check.

    ``witnesses`` keeps the first few counterexamples in enumeration order,
    so the first one is the minimal witness. ``notes`` holds observations that
    are reported but not asserted.
    """

    name: str
    checked: int = 0
    violations: int = 0
    witnesses: list = field(default_factory=list)
    mode: str = "exhaustive"
    seed: int | None = None
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def record(self, witness: Any) -> None:
        self.violations += 1
        if len(self.witnesses) < MAX_WITNESSES:
            self.witnesses.append(witness)

    def tally(self, ok: np.ndarray, describe: Callable[[int], Any]) -> None:
        """Count a boolean array of outcomes; ``describe`` maps a flat index to a witness."""
        ok = np.asarray(ok, dtype=bool).ravel()
        self.checked += ok.size
        bad = np.flatnonzero(~ok)
        self.violations += int(bad.size)
        room = MAX_WITNESSES - len(self.witnesses)
        for i in bad[:max(room, 0)]:
            self.witnesses.append(describe(int(i)))

    def absorb(self, other: "CheckReport") -> None:
        self.checked += other.checked
        self.violations += other.violations
        room = MAX_WITNESSES - len(self.witnesses)
        self.witnesses.extend(other.witnesses[:max(room, 0)])
        if other.mode == "sampled":
            self.mode = "sampled"
            self.seed = other.seed

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name}\t{status}\t{self.mode}\t{self.checked}\t{self.violations}"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "mode": self.mode,
            "seed": self.seed,
            "checked": self.checked,
            "violations": self.violations,
            "witnesses": [_jsonable(w) for w in self.witnesses],
            "notes": {k: _jsonable(v) for k, v in sorted(self.notes.items())},
        }


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


def all_passed(reports: Iterable[CheckReport]) -> bool:
    return all(r.passed for r in reports)
