"""Shared validation report type.

Validators walk their axiom list in a fixed order and stop at the first
violation, so reports are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactlin import StructureError


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    rule: str | None = None
    witness: tuple | None = None

    @staticmethod
    def passed() -> "ValidationReport":
        return ValidationReport(True)

    @staticmethod
    def failed(rule: str, witness: tuple) -> "ValidationReport":
        return ValidationReport(False, rule, tuple(witness))

    def require(self, what: str = "object") -> None:
        if not self.ok:
            raise StructureError(self.rule, self.witness, f"invalid {what}: {self.rule} at {self.witness!r}")

    def to_json(self):
        out = {"ok": self.ok}
        if not self.ok:
            out["rule"] = self.rule
            out["witness"] = [str(w) for w in self.witness] if self.witness else []
        return out
