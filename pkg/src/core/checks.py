"""
Pass/fail records shared by verification routines, reports and the CLI manifest.
"""
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List


@dataclass(frozen=True)
class CheckResult:
    """One named numeric contract with its observed residual."""

    name: str
    passed: bool
    residual: float
    detail: str = ""

    @classmethod
    def from_residual(cls, name: str, residual: float, tol: float, detail: str = "") -> "CheckResult":
        return cls(name=name, passed=bool(residual <= tol), residual=float(residual), detail=detail)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "pass": self.passed,
            "residual": self.residual,
            "detail": self.detail,
        }


def all_passed(checks: Iterable[CheckResult]) -> bool:
    return all(check.passed for check in checks)


def failed(checks: Iterable[CheckResult]) -> List[CheckResult]:
    return [check for check in checks if not check.passed]
