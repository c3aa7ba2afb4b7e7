"""Deterministic run reports.

A report is a stable key/value tree carrying the configuration echo and one
entry per check.  The structured rendering is canonical JSON (sorted keys,
fixed separators) so identical configurations produce byte-identical output;
wall-clock timing therefore appears only in the text rendering.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

SCHEMA_VERSION = 1

OK_VERDICTS = {"pass", "vacuous_pass", "ok"}
BAD_VERDICTS = {"counterexample", "fail", "error"}


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    verdict: str
    details: dict = field(default_factory=dict)
    witnesses: tuple = ()

    def to_tree(self) -> dict:
        return {
            "id": self.check_id,
            "verdict": self.verdict,
            "details": self.details,
            "witnesses": [list(w) if isinstance(w, (tuple, list)) else w for w in self.witnesses],
        }


@dataclass
class RunReport:
    command: str
    config: dict
    checks: list[CheckResult] = field(default_factory=list)

    def add(self, check_id: str, verdict: str, details: dict | None = None, witnesses=()) -> None:
        self.checks.append(CheckResult(check_id, verdict, details or {}, tuple(witnesses)))

    @property
    def undecided_total(self) -> int:
        return sum(int(c.details.get("undecided", 0)) for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if all(c.verdict not in BAD_VERDICTS for c in self.checks) else 1

    def to_tree(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "config": self.config,
            "checks": [c.to_tree() for c in self.checks],
            "undecided_total": self.undecided_total,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_tree(), sort_keys=True, indent=2) + "\n"

    def to_text(self, elapsed: float | None = None) -> str:
        lines = [f"grouptower {self.command}"]
        for key in sorted(self.config):
            lines.append(f"  config {key} = {self.config[key]}")
        for c in self.checks:
            mark = "PASS" if c.verdict in OK_VERDICTS else ("FAIL" if c.verdict in BAD_VERDICTS else c.verdict.upper())
            extras = " ".join(f"{k}={v}" for k, v in sorted(c.details.items()) if not isinstance(v, (list, dict)))
            lines.append(f"{mark:12s} {c.check_id} [{c.verdict}] {extras}".rstrip())
            for w in c.witnesses:
                lines.append(f"             witness: {w}")
        lines.append(f"undecided_total = {self.undecided_total}")
        if elapsed is not None:
            lines.append(f"elapsed_s = {elapsed:.2f}")
        return "\n".join(lines) + "\n"
