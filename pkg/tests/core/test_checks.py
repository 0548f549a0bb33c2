import pytest

from src.core import checks
from src.core.exceptions import (
    AbsoluteContinuityError,
    InvalidArgumentError,
    InvariantSetViolationError,
    NoConvergenceError,
    RuelleLabError,
    TailEscapeError,
)


class TestCheckResult:
    """Test named numeric checks"""

    def test_from_residual(self):
        ok = checks.CheckResult.from_residual("a", 1e-12, 1e-10)
        bad = checks.CheckResult.from_residual("b", 1e-3, 1e-10, detail="too big")
        assert ok.passed and not bad.passed
        assert bad.to_dict() == {"name": "b", "pass": False, "residual": 1e-3, "detail": "too big"}

    def test_tolerance_is_inclusive(self):
        assert checks.CheckResult.from_residual("edge", 0.5, 0.5).passed

    def test_nan_residual_fails(self):
        assert not checks.CheckResult.from_residual("nan", float("nan"), 1.0).passed

    def test_failed_and_all_passed(self):
        results = [checks.CheckResult("a", True, 0.0), checks.CheckResult("b", False, 1.0)]
        assert not checks.all_passed(results)
        assert [c.name for c in checks.failed(results)] == ["b"]
        assert checks.all_passed([])


class TestExceptions:
    """Test the error hierarchy"""

    @pytest.mark.parametrize("error", [
        InvalidArgumentError("x"),
        TailEscapeError(step=3, point=0.0),
        NoConvergenceError(1.0, 10),
        AbsoluteContinuityError([1, 2]),
    ])
    def test_everything_is_a_value_error(self, error):
        assert isinstance(error, RuelleLabError)
        assert isinstance(error, ValueError)

    def test_tail_escape_carries_its_step(self):
        error = TailEscapeError(step=3, point=1e-5)
        assert error.step == 3
        assert "step 3" in str(error)

    def test_offending_cells_are_listed(self):
        error = InvariantSetViolationError(range(30))
        assert error.cells == list(range(30))
        assert "..." in str(error)
