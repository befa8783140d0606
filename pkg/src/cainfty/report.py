"""Verification reports with deterministic ordering."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

TOOL_VERSION = "0.1.0"
REPORT_FORMAT = "cainfty-report/1"

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped-out-of-window"
STATUSES = (PASS, FAIL, SKIPPED)


class WindowExceeded(RuntimeError):
    """An evaluation needed a bar weight or cobar length beyond the cap."""


class BudgetExceeded(RuntimeError):
    """Enumeration would exceed the configured number of basis tensors."""


def fmt_key(key) -> str:
    return repr(key)


def fmt_vec(vec, ring=None) -> Dict[str, str]:
    out = {}
    for k in sorted(vec, key=repr):
        c = vec[k]
        out[fmt_key(k)] = ring.format(c) if ring is not None else str(c)
    return out


@dataclass
class CheckRecord:
    check: str
    objects: List[str]
    clause: Any
    status: str
    witness: Optional[str] = None
    residual: Optional[Dict[str, str]] = None
    detail: Optional[str] = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")

    def as_dict(self) -> Dict[str, Any]:
        d = {"check": self.check, "objects": list(self.objects), "clause": self.clause, "status": self.status}
        if self.witness is not None:
            d["witness"] = self.witness
        if self.residual is not None:
            d["residual"] = self.residual
        if self.detail is not None:
            d["detail"] = self.detail
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(d["check"], list(d["objects"]), d["clause"], d["status"],
                   d.get("witness"), d.get("residual"), d.get("detail"))


def _order(rec: CheckRecord):
    clause = rec.clause
    if isinstance(clause, (int, float)):
        ck = (0, clause, "")
    else:
        ck = (1, 0, json.dumps(clause, sort_keys=True))
    return (rec.check, ck, rec.witness or "")


@dataclass
class Report:
    records: List[CheckRecord] = field(default_factory=list)

    def add(self, *args, **kw) -> CheckRecord:
        rec = CheckRecord(*args, **kw)
        self.records.append(rec)
        return rec

    def extend(self, other: "Report") -> "Report":
        self.records.extend(other.records)
        return self

    @property
    def ordered(self) -> List[CheckRecord]:
        return sorted(self.records, key=_order)

    def count(self, status: str) -> int:
        return sum(1 for r in self.records if r.status == status)

    @property
    def passed(self) -> bool:
        """True when nothing failed; skipped records never count against."""
        return self.count(FAIL) == 0

    @property
    def failures(self) -> List[CheckRecord]:
        return [r for r in self.ordered if r.status == FAIL]

    def first_failure(self) -> Optional[CheckRecord]:
        f = self.failures
        return f[0] if f else None

    def summary(self) -> Dict[str, int]:
        return {"checks": len(self.records), "pass": self.count(PASS),
                "fail": self.count(FAIL), "skipped": self.count(SKIPPED)}

    def as_dict(self) -> Dict[str, Any]:
        return {"format": REPORT_FORMAT, "tool_version": TOOL_VERSION,
                "summary": self.summary(), "records": [r.as_dict() for r in self.ordered]}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Report":
        d = json.loads(text)
        if d.get("format") != REPORT_FORMAT:
            raise ValueError("not a cainfty report")
        return cls([CheckRecord.from_dict(r) for r in d["records"]])

    def to_text(self) -> str:
        lines = []
        for r in self.ordered:
            line = f"[{r.status}] {r.check} {','.join(r.objects)} clause={json.dumps(r.clause)}"
            if r.witness is not None:
                line += f" witness={r.witness}"
            if r.detail:
                line += f" ({r.detail})"
            lines.append(line)
        s = self.summary()
        lines.append(f"{s['checks']} checks: {s['pass']} passed, {s['fail']} failed, {s['skipped']} skipped")
        return "\n".join(lines) + "\n"
