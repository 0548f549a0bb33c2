import numpy as np
import pytest

from src.core.exceptions import AbsoluteContinuityError, MustDiscretizeError
from src.dynamics import make_gauss
from src.measures import (
    AtomicMeasure,
    HistogramMeasure,
    act_on_measure,
    atomic_distance,
    column_sum_defect,
    derivative_pairing_residual,
    discretize,
    filter_normalization_checks,
    gauss_mu0,
    harmonic_function,
    harmonic_invariance_residual,
    invariant_density,
    is_absolutely_continuous,
    lebesgue,
    pushforward_matrix,
    radon_nikodym,
    riesz_invariance_residual,
    ulam_matrix,
    verify_table1,
)
from src.transferop import make_operator
from src.utils import FunctionOnGrid


class TestUlamMatrices:
    """Test the discretized measure-side actions"""

    def test_doubling_half_at_four_cells(self, half):
        P = ulam_matrix(half, 4)
        expected = [[0.5, 0.5, 0, 0], [0, 0, 0.5, 0.5], [0.5, 0.5, 0, 0], [0, 0, 0.5, 0.5]]
        np.testing.assert_allclose(P.to_dense(), expected, atol=1e-14)
        assert P.is_stochastic()

    def test_pushforward_is_transpose_of_pf(self, doubling, half):
        T = pushforward_matrix(doubling, 4)
        np.testing.assert_allclose(T.to_dense(), ulam_matrix(half, 4).to_dense().T, atol=1e-14)
        assert column_sum_defect(T) < 1e-14

    def test_gauss_pushforward_loses_the_tail(self, gauss):
        T = pushforward_matrix(gauss, 64)
        uniform = np.full(64, 1.0 / 64)
        assert T.act(uniform).sum() == pytest.approx(1.0 - 1.0 / 1001, abs=1e-10)

    def test_frame_lists_nonzero_entries(self, half):
        frame = ulam_matrix(half, 4).to_frame()
        assert list(frame.columns) == ["row", "col", "value"]
        assert len(frame) == 8


class TestDualAction:
    """Test mu -> mu R on each measure kind"""

    def test_dirac_under_half(self, half):
        image = act_on_measure(half, AtomicMeasure.dirac(0.0))
        assert atomic_distance(image, AtomicMeasure([0.0, 0.5], [0.5, 0.5])) < 1e-12
        assert not is_absolutely_continuous(image, AtomicMeasure.dirac(0.0))

    def test_dirac_under_cos2_is_fixed(self, cos2):
        image = act_on_measure(cos2, AtomicMeasure.dirac(0.0))
        assert atomic_distance(image, AtomicMeasure.dirac(0.0)) < 1e-12

    def test_lebesgue_is_fixed_by_half(self, half, uniform_histogram):
        image = act_on_measure(half, uniform_histogram)
        np.testing.assert_allclose(image.masses, uniform_histogram.masses, atol=1e-14)

    def test_closed_form_must_be_discretized(self, half):
        with pytest.raises(MustDiscretizeError):
            act_on_measure(half, lebesgue())

    def test_radon_nikodym_of_cos2(self, cos2, uniform_histogram):
        derivative = radon_nikodym(cos2, uniform_histogram)
        edges = np.linspace(0.0, 1.0, 65)
        exact = 1.0 + 64 * (np.sin(2 * np.pi * edges[1:]) - np.sin(2 * np.pi * edges[:-1])) / (2 * np.pi)
        np.testing.assert_allclose(derivative.values, exact, atol=1e-9)
        residual = derivative_pairing_residual(cos2, uniform_histogram, derivative, lambda x: np.sin(3 * x))
        assert residual < 1e-12

    def test_radon_nikodym_needs_absolute_continuity(self, half):
        mu = HistogramMeasure(np.array([1.0, 0.0, 0.0, 0.0]))
        with pytest.raises(AbsoluteContinuityError) as info:
            radon_nikodym(half, mu)
        assert info.value.cells == [2]


class TestSolvers:
    """Test invariant densities and harmonic functions"""

    def test_doubling_invariant_density_is_uniform(self, doubling):
        result = invariant_density(pushforward_matrix(doubling, 64))
        np.testing.assert_allclose(result.measure.masses, np.full(64, 1.0 / 64), atol=1e-12)
        assert result.unique

    def test_gauss_invariant_density(self):
        gauss = make_gauss(1000)
        result = invariant_density(pushforward_matrix(gauss, 256))
        reference = discretize(gauss_mu0(), 256)
        assert np.abs(result.measure.masses - reference.masses).sum() < 0.05
        assert result.unique

    def test_twin_doubling_is_not_unique(self, twin_doubling):
        result = invariant_density(pushforward_matrix(twin_doubling, 16))
        assert not result.unique
        assert result.measure.total_mass == pytest.approx(1.0)

    def test_harmonic_function_of_normalized_operator(self, cos2):
        result = harmonic_function(ulam_matrix(cos2, 32))
        assert result.eigenvalue == pytest.approx(1.0)
        np.testing.assert_allclose(result.function.values, 1.0, atol=1e-9)

    def test_harmonic_residual_belongs_to_the_returned_function(self, doubling):
        M = ulam_matrix(make_operator(doubling, "custom", "y"), 32)
        result = harmonic_function(M)
        h = result.function.values
        assert np.ptp(h) > 0.1
        expected = np.max(np.abs(M.function_action(h) - result.eigenvalue * h))
        assert result.residual == pytest.approx(expected, abs=1e-15)
        assert result.residual < 1e-9

    def test_harmonic_invariance(self, doubling):
        n = 16
        residual = harmonic_invariance_residual(
            pushforward_matrix(doubling, n), FunctionOnGrid(np.ones(n)), HistogramMeasure(np.full(n, 1.0 / n))
        )
        assert residual < 1e-14


class TestWorkedExamples:
    """Test the known invariant-measure identities"""

    def test_table1(self):
        checks = verify_table1(256)
        assert [c.name for c in checks] == [
            "table1.lebesgue_R", "table1.delta0_R", "table1.lebesgue_R_prime", "table1.delta0_R_prime",
        ]
        assert all(c.passed for c in checks), [c.to_dict() for c in checks if not c.passed]

    def test_table1_records_a_singular_image(self, monkeypatch):
        def singular(R, reference):
            raise AbsoluteContinuityError([3])

        monkeypatch.setattr("src.measures.examples.radon_nikodym", singular)
        checks = verify_table1(64)
        assert len(checks) == 4
        derivative = checks[2]
        assert derivative.name == "table1.lebesgue_R_prime"
        assert not derivative.passed
        assert "cells [3]" in derivative.detail
        assert all(c.passed for c in checks if c is not derivative)

    def test_filter_readings(self):
        assert all(c.passed for c in filter_normalization_checks())

    def test_riesz_products_are_pushed_exactly(self):
        assert riesz_invariance_residual(2) < 1e-10

    def test_operator_for_tripling_fixes_nothing_at_zero(self, tripling):
        image = act_on_measure(make_operator(tripling, "riesz"), AtomicMeasure.dirac(0.0))
        assert image.mass_at(0.0) == pytest.approx(2.0 / 3.0)
