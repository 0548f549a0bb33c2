import pytest

from src.core.exceptions import HistoryExhaustedError, InvalidArgumentError, TailEscapeError
from src.dynamics import SolenoidPoint, solenoid_drop, solenoid_lift, solenoid_orbit, solenoid_residual


class TestSolenoid:
    """Test truncated solenoid points and the lift"""

    def test_from_history_satisfies_the_relation(self, doubling):
        point = SolenoidPoint.from_history(doubling, 0.6, (0, 1))
        assert point.coordinates == pytest.approx((0.6, 0.3, 0.65))
        assert solenoid_residual(doubling, point) < 1e-12

    def test_lift_records_the_branch(self, doubling):
        lifted = solenoid_lift(doubling, SolenoidPoint((0.6,), ()))
        assert lifted.base == pytest.approx(0.2)
        assert lifted.history == (1,)
        assert lifted.coordinates[1] == 0.6

    def test_drop_undoes_lift(self, doubling):
        point = SolenoidPoint.from_history(doubling, 0.37, (1, 0, 1))
        assert solenoid_drop(solenoid_lift(doubling, point)) == point

    def test_drop_of_empty_history(self):
        with pytest.raises(HistoryExhaustedError):
            solenoid_drop(SolenoidPoint((0.5,), ()))

    def test_orbit_keeps_the_relation(self, tripling):
        orbit = solenoid_orbit(tripling, SolenoidPoint((0.123,), ()), 10)
        assert len(orbit) == 11
        assert len(orbit[-1].history) == 10
        assert solenoid_residual(tripling, orbit[-1]) < 1e-9

    def test_lift_from_the_tail(self, gauss):
        with pytest.raises(TailEscapeError):
            solenoid_lift(gauss, SolenoidPoint((1e-4,), ()))

    def test_coordinates_must_match_history(self):
        with pytest.raises(InvalidArgumentError):
            SolenoidPoint((0.1, 0.2), ())
