"""Check results shared by all verification routines."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class CheckResult:
    code: str
    status: str  # "pass" | "fail" | "skipped"
    anchor: str = ""
    witness: Any = None
    reason: str | None = None
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    @property
    def passed_or_skipped(self) -> bool:
        return self.status in ("pass", "skipped")

    def to_json(self) -> dict:
        d: dict[str, Any] = {"axiom": self.code, "anchor": self.anchor, "status": self.status}
        if self.reason is not None:
            d["reason"] = self.reason
        if self.witness is not None:
            d["witness"] = self.witness
        if self.details:
            d["details"] = self.details
        return d


def passed(code: str, anchor: str = "", **details) -> CheckResult:
    return CheckResult(code, "pass", anchor, details=details)


def failed(code: str, witness, anchor: str = "", reason: str | None = None) -> CheckResult:
    return CheckResult(code, "fail", anchor, witness=witness, reason=reason)


def skipped(code: str, reason: str, anchor: str = "") -> CheckResult:
    return CheckResult(code, "skipped", anchor, reason=reason)


@dataclass
class Report:
    """An ordered bundle of check results."""
    entries: list[CheckResult] = field(default_factory=list)

    def add(self, r: CheckResult) -> CheckResult:
        self.entries.append(r)
        return r

    def extend(self, rs) -> None:
        for r in rs:
            self.add(r)

    @property
    def ok(self) -> bool:
        return all(e.passed_or_skipped for e in self.entries)

    def failures(self) -> list[CheckResult]:
        return [e for e in self.entries if e.status == "fail"]

    def __getitem__(self, code: str) -> CheckResult:
        for e in self.entries:
            if e.code == code:
                return e
        raise KeyError(code)

    def __contains__(self, code: str) -> bool:
        return any(e.code == code for e in self.entries)

    def __iter__(self):
        return iter(self.entries)
