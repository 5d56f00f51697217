"""Check results and their serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass


@dataclass
class CheckResult:
    name: str
    params: dict
    passed: bool
    difference: list[str] | None = None
    note: str | None = None
    skipped: bool = False
    millis: int = 0

    @property
    def status(self) -> str:
        if self.skipped:
            return "skipped"
        return "pass" if self.passed else "fail"

    def to_json(self) -> dict:
        out = {"name": self.name, "params": self.params, "status": self.status}
        if self.status == "fail":
            out["difference"] = self.difference or [self.note or "nonzero difference"]
        if self.skipped and self.note:
            out["message"] = self.note
        out["millis"] = self.millis
        return out


def report_json(suite: str, rank: int, max_degree: int, max_mode: int, checks: list[CheckResult]) -> str:
    doc = {
        "suite": suite,
        "rank": rank,
        "maxDegree": max_degree,
        "maxMode": max_mode,
        "checks": [c.to_json() for c in checks],
    }
    return json.dumps(doc, indent=2) + "\n"


def _params_text(params: dict) -> str:
    return " ".join(f"{k}={v}" for k, v in params.items())


def report_text(suite: str, rank: int, max_degree: int, max_mode: int, checks: list[CheckResult]) -> str:
    lines = [f"suite {suite} rank={rank} maxDegree={max_degree} maxMode={max_mode}"]
    for c in checks:
        line = f"{c.status.upper():7} {c.name} {_params_text(c.params)}"
        if c.millis:
            line += f" ({c.millis} ms)"
        lines.append(line)
        if c.status == "fail":
            for d in c.difference or []:
                lines.append(f"        {d}")
        if c.skipped and c.note:
            lines.append(f"        {c.note}")
    counts = {s: sum(c.status == s for c in checks) for s in ("pass", "fail", "skipped")}
    lines.append(f"{counts['pass']} passed, {counts['fail']} failed, {counts['skipped']} skipped")
    return "\n".join(lines) + "\n"
