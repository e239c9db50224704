"""Check-row reports shared by the solvers, verifiers and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

#: Tolerance used for purely informational rows (always passing).
INFORMATIONAL = float("inf")


@dataclass(frozen=True)
class CheckRow:
    name: str
    measured: float
    tolerance: float
    passed: bool


@dataclass
class SolveReport:
    """Solver / verifier output: named checks, artifacts and metadata."""

    command: str
    checks: list[CheckRow] = field(default_factory=list)
    matrices: dict[str, np.ndarray] = field(default_factory=dict)
    details: dict[str, object] = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.checks)

    def check(self, name: str, measured: float, tolerance: float,
              passed: bool | None = None) -> CheckRow:
        """Append a row; by default it passes when measured <= tolerance."""
        measured = float(measured)
        tolerance = float(tolerance)
        if passed is None:
            passed = measured <= tolerance
        row = CheckRow(name, measured, tolerance, bool(passed))
        self.checks.append(row)
        return row

    def info(self, name: str, measured: float) -> CheckRow:
        """Append an informational (always passing) row."""
        return self.check(name, measured, INFORMATIONAL, passed=True)

    def csv_text(self) -> str:
        lines = ["check_name,value,tolerance,pass"]
        for row in self.checks:
            lines.append(
                f"{row.name},{row.measured:.17g},{row.tolerance:.17g},"
                f"{1 if row.passed else 0}"
            )
        return "\n".join(lines) + "\n"
