import numpy as np
import pytest

from src.core.exceptions import (
    InvalidArgumentError,
    InvariantSetViolationError,
    NormalizationRequiredError,
    NotConjugateError,
    NotHarmonicError,
)
from src.transferop import (
    ComposedTransferOperator,
    check_pullout,
    cocycle_check,
    conditional_expectation_residual,
    conjugate,
    decomposition_residual,
    density_operator,
    doob,
    ergodic_decomposition,
    expectation_E,
    harmonic_residual,
    invariant_cell_sets,
    kernel_decompose,
    make_operator,
    restrict,
)


def rotate(x):
    return np.mod(np.asarray(x) + 0.5, 1.0)


def unrotate(x):
    return np.mod(np.asarray(x) - 0.5, 1.0)


class TestPullOut:
    """Test R((f o sigma) g) = f R(g)"""

    @pytest.mark.parametrize("fixture", ["half", "cos2", "gauss_pf"])
    def test_pullout(self, fixture, request):
        R = request.getfixturevalue(fixture)
        assert check_pullout(R, np.sin, lambda y: np.cos(3 * y)) < 1e-10

    def test_pullout_on_composite(self, half, cos2):
        assert check_pullout(ComposedTransferOperator(half, cos2), np.sin, np.exp) < 1e-10


class TestKernelDecomposition:
    """Test f = f0 + fbar with R(f0) = 0"""

    def test_f0_in_kernel(self, cos2):
        f = lambda y: np.exp(y) * np.sin(5 * y)
        f0, fbar = kernel_decompose(cos2, f)
        x = np.linspace(0.01, 0.99, 40)
        np.testing.assert_allclose(cos2.apply(f0, x), 0.0, atol=1e-12)
        np.testing.assert_allclose(f0(x) + fbar(x), f(x), atol=1e-14)

    def test_fbar_is_constant_on_fibers(self, half):
        _, fbar = kernel_decompose(half, np.square)
        assert fbar(0.1) == pytest.approx(fbar(0.6))

    def test_needs_normalized_operator(self, gauss_pf):
        with pytest.raises(NormalizationRequiredError):
            kernel_decompose(gauss_pf, np.sin)

    def test_conditional_expectation_for_lebesgue(self, half):
        residual = conditional_expectation_residual(
            half, lambda x: np.ones_like(x), np.square, lambda x: np.cos(2 * np.pi * x)
        )
        assert residual < 1e-10

    def test_expectation_is_idempotent(self, half):
        E = expectation_E(half, np.exp)
        EE = expectation_E(half, E)
        x = np.linspace(0.0, 0.95, 9)
        np.testing.assert_allclose(EE(x), E(x), atol=1e-14)


class TestDoob:
    """Test Doob transforms and density operators"""

    def test_doob_definition(self, half):
        k = lambda y: 1.0 + y
        Rk = doob(half, k, "1+y")
        x = np.linspace(0.0, 0.9, 10)
        np.testing.assert_allclose(Rk.apply(np.cos, x), half.apply(lambda y: np.cos(y) * k(y), x) / k(x))

    def test_doob_rejects_nonpositive_function(self, half):
        with pytest.raises(InvalidArgumentError):
            doob(half, lambda y: y - 0.5)

    def test_lebesgue_density_operator_is_half(self, doubling, half):
        R = density_operator(doubling, lambda y: np.ones_like(y))
        x = np.linspace(0.0, 0.9, 10)
        np.testing.assert_allclose(R.apply(np.sin, x), half.apply(np.sin, x))

    def test_gauss_density_operator_is_normalized_up_to_tail(self, gauss):
        rho = lambda y: 1.0 / ((1.0 + y) * np.log(2.0))
        R = density_operator(gauss, rho, "gauss")
        # the dropped branches carry (1 + x) / (1001 + x) of R(1)(x)
        assert R.normalization_residual() < 2.0 / 1001


class TestHarmonicAndCocycle:
    """Test harmonic functions and the cocycle identity"""

    def test_constants_are_harmonic(self, cos2):
        assert harmonic_residual(cos2, lambda y: np.ones_like(y)) < 1e-12

    def test_cocycle_of_constant(self, cos2):
        result = cocycle_check(cos2, lambda y: np.ones_like(y), k=3)
        assert result.residual < 1e-12
        assert result.literal_residual < 1e-12

    def test_non_harmonic_is_rejected(self, half):
        with pytest.raises(NotHarmonicError):
            cocycle_check(half, lambda y: y)

    def test_k_must_be_positive(self, half):
        with pytest.raises(InvalidArgumentError):
            cocycle_check(half, lambda y: np.ones_like(y), k=0)


class TestConjugation:
    """Test transport of an operator along a point map"""

    def test_conjugate_stays_normalized_with_pullout(self, half):
        R = conjugate(half, rotate, unrotate, label="rot")
        assert R.normalization_residual() < 1e-12
        periodic = lambda y: np.cos(2 * np.pi * y)
        assert check_pullout(R, periodic, lambda y: np.sin(2 * np.pi * y)) < 1e-10

    def test_wrong_target_is_rejected(self, half, doubling):
        with pytest.raises(NotConjugateError):
            conjugate(half, rotate, unrotate, target=doubling)

    def test_non_inverse_maps_are_rejected(self, half):
        with pytest.raises(InvalidArgumentError):
            conjugate(half, rotate, lambda x: np.asarray(x))


class TestRestriction:
    """Test invariant cell sets and the ergodic decomposition"""

    def test_twin_doubling_splits_in_two(self, twin_doubling):
        sets = invariant_cell_sets(twin_doubling, 8)
        assert [s.tolist() for s in sets] == [[0, 1, 2, 3], [4, 5, 6, 7]]

    def test_doubling_is_indecomposable(self, doubling):
        assert len(invariant_cell_sets(doubling, 8)) == 1

    def test_decomposition_reassembles_the_operator(self, twin_doubling):
        R = make_operator(twin_doubling, "half")
        parts = ergodic_decomposition(R, 8)
        assert len(parts) == 2
        assert decomposition_residual(R, parts, np.exp) < 1e-12

    def test_restricted_operator_vanishes_off_its_set(self, twin_doubling):
        R = make_operator(twin_doubling, "half")
        left = restrict(R, range(4), 8)
        assert left.apply(lambda y: np.ones_like(y), 0.3) == pytest.approx(1.0)
        assert left.apply(lambda y: np.ones_like(y), 0.7) == 0.0

    def test_restricted_operator_records_its_cells(self, twin_doubling):
        R = make_operator(twin_doubling, "half")
        left = restrict(R, [3, 1, 0, 2], 8)
        assert left.branch_map is twin_doubling
        assert left.n == 8
        assert left.cells.dtype == np.int64
        np.testing.assert_array_equal(np.sort(left.cells), [0, 1, 2, 3])
        assert left.label.endswith("cells[0..3]")

    def test_non_invariant_set(self, twin_doubling):
        R = make_operator(twin_doubling, "half")
        with pytest.raises(InvariantSetViolationError) as info:
            restrict(R, [0, 1], 8)
        assert 0 in info.value.cells
