"""Value objects returned by every verification routine."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = ["CheckEntry", "CheckReport"]


@dataclass(frozen=True)
class CheckEntry:
    """One named residual against its tolerance.

    ``status`` is ``"pass"``, ``"fail"``, ``"reported"`` (no tolerance is
    asserted) or ``"skipped"``.
    """

    name: str
    residual: float
    tolerance: float | None
    status: str
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def line(self) -> str:
        tol = "-" if self.tolerance is None else f"{self.tolerance:.1e}"
        res = "-" if self.residual is None or math.isnan(self.residual) else f"{self.residual:.3e}"
        text = f"[{self.status.upper():8s}] {self.name}: residual={res} tol={tol}"
        return f"{text}  ({self.note})" if self.note else text


@dataclass
class CheckReport:
    entries: list = field(default_factory=list)

    def add(self, name: str, residual: float, tolerance: float | None = None, note: str = "") -> CheckEntry:
        residual = float(residual)
        if tolerance is None:
            status = "reported"
        else:
            status = "pass" if residual <= tolerance else "fail"
        entry = CheckEntry(name, residual, tolerance, status, note)
        self.entries.append(entry)
        return entry

    def skip(self, name: str, note: str) -> CheckEntry:
        entry = CheckEntry(name, float("nan"), None, "skipped", note)
        self.entries.append(entry)
        return entry

    def fail(self, name: str, note: str) -> CheckEntry:
        """Record a check that could not run (an exception, say) as a failure."""
        entry = CheckEntry(name, float("nan"), None, "fail", note)
        self.entries.append(entry)
        return entry

    def extend(self, other: "CheckReport") -> "CheckReport":
        self.entries.extend(other.entries)
        return self

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def max_residual(self) -> float:
        vals = [e.residual for e in self.entries if not math.isnan(e.residual)]
        return max(vals) if vals else 0.0

    def __getitem__(self, name: str) -> CheckEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def text(self) -> str:
        return "\n".join(e.line() for e in self.entries)

    __str__ = text
