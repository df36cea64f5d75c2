"""Structured pass/fail reports shared by the verification routines and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"check": self.name, "passed": self.passed, **self.details}


@dataclass
class Report:
    """An ordered list of named checks plus the parameters they ran with."""

    name: str
    parameters: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, passed: bool, **details: Any) -> bool:
        self.checks.append(Check(name, bool(passed), _plain(details)))
        return bool(passed)

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.details))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {"report": self.name, "parameters": _plain(self.parameters), "passed": self.passed,
                "checks": [c.to_dict() for c in self.checks]}

    def summary(self) -> str:
        lines = [f"[{'PASS' if self.passed else 'FAIL'}] {self.name}"]
        for c in self.checks:
            lines.append(f"  {'ok ' if c.passed else 'BAD'} {c.name}")
        return "\n".join(lines)


def _plain(obj):
    """Convert numpy scalars/arrays and tuples into JSON-friendly builtins."""
    import numpy as np

    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    return obj
