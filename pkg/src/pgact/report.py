"""Verification reports shared by every checker."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASSED = "passed"
FAILED = "failed"
VACUOUS = "vacuous"
INFO = "info"


@dataclass
class Check:
    name: str
    status: str
    witness: Any = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status != FAILED

    def to_dict(self) -> dict:
        d = {"name": self.name, "status": self.status}
        if self.witness is not None:
            d["witness"] = _plain(self.witness)
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass
class VerificationReport:
    subject: str
    checks: list[Check] = field(default_factory=list)
    data: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, name: str, passed: bool, witness=None, detail: str = "") -> bool:
        self.checks.append(Check(name, PASSED if passed else FAILED, witness, detail))
        return passed

    def vacuous(self, name: str, witness=None, detail: str = ""):
        self.checks.append(Check(name, VACUOUS, witness, detail))

    def info(self, name: str, detail: str, witness=None):
        self.checks.append(Check(name, INFO, witness, detail))

    def extend(self, other: "VerificationReport", prefix: str = ""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.status, c.witness, c.detail))

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAILED]

    def first_failure(self) -> Check | None:
        fails = self.failures
        return fails[0] if fails else None

    def by_name(self, name: str) -> list[Check]:
        return [c for c in self.checks if c.name == name]

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "ok": self.ok,
            "checks": [c.to_dict() for c in self.checks],
            "data": _plain(self.data),
        }

    def summary(self, verbose: bool = False) -> str:
        counts: dict[str, int] = {}
        for c in self.checks:
            counts[c.status] = counts.get(c.status, 0) + 1
        head = f"{self.subject}: {'OK' if self.ok else 'FAILED'} " + ", ".join(
            f"{k}={v}" for k, v in sorted(counts.items())
        )
        lines = [head]
        for c in self.checks:
            if c.status == FAILED or (verbose and c.status != PASSED) or c.status == INFO:
                w = f" witness={_plain(c.witness)}" if c.witness is not None else ""
                d = f" ({c.detail})" if c.detail else ""
                lines.append(f"  [{c.status}] {c.name}{w}{d}")
        return "\n".join(lines)


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (str, int, bool, float)) or x is None:
        return x
    return str(x)
