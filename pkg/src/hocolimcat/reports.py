"""Check reports shared by the library checkers and the command line."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field


@dataclass
class Finding:
    law: str
    witness: str

    def to_json(self) -> dict:
        return {"law": self.law, "witness": self.witness}


@dataclass
class Report:
    """Outcome of a checker: which laws were exercised, how often, and what failed."""

    name: str
    findings: list[Finding] = field(default_factory=list)
    checked: Counter = field(default_factory=Counter)
    notes: list[str] = field(default_factory=list)
    max_findings: int = 50

    @property
    def passed(self) -> bool:
        return not self.findings

    def tick(self, law: str, n: int = 1) -> None:
        self.checked[law] += n

    def expect(self, ok: bool, law: str, witness) -> bool:
        self.checked[law] += 1
        if not ok and len(self.findings) < self.max_findings:
            self.findings.append(Finding(law, witness if isinstance(witness, str) else repr(witness)))
        return ok

    def fail(self, law: str, witness) -> None:
        self.expect(False, law, witness)

    def merge(self, other: "Report") -> "Report":
        self.findings.extend(other.findings)
        self.checked.update(other.checked)
        self.notes.extend(other.notes)
        return self

    def failed_laws(self) -> set[str]:
        return {f.law for f in self.findings}

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "status": "pass" if self.passed else "fail",
            "checked": dict(sorted(self.checked.items())),
            "findings": [f.to_json() for f in self.findings],
            "notes": list(self.notes),
        }

    def to_text(self) -> str:
        lines = [f"{self.name}: {'PASS' if self.passed else 'FAIL'}"]
        for law, n in sorted(self.checked.items()):
            lines.append(f"  {law}: {n} checked")
        for note in self.notes:
            lines.append(f"  note: {note}")
        for f in self.findings:
            lines.append(f"  FAILED {f.law}: {f.witness}")
        return "\n".join(lines)
