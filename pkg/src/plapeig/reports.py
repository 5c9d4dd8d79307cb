"""Outcome record shared by the geometry and verification checks."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckReport:
    """Result of one numerical check.

    `margin` is bound - measured (positive = slack).  A check whose
    hypothesis is not satisfied is reported as "hypothesis-failed" and is
    excluded from pass/fail aggregation: a theorem's premise not holding
    is not an artifact failure.
    """

    name: str
    passed: bool
    measured: float
    bound: float
    margin: float
    hypothesis_ok: bool = True
    details: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        if not self.hypothesis_ok:
            return "hypothesis-failed"
        return "passed" if self.passed else "failed"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "passed": bool(self.passed),
            "hypothesis_ok": bool(self.hypothesis_ok),
            "measured": float(self.measured),
            "bound": float(self.bound),
            "margin": float(self.margin),
            "details": {k: float(v) for k, v in self.details.items()},
        }
