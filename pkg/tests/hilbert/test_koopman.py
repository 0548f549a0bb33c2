import numpy as np
import pytest

from src.core.exceptions import InvalidArgumentError, NotInvariantError, SizeLimitError
from src.dynamics import make_cell_permutation
from src.hilbert import adjoint_residual, exactness_score, is_isometry, koopman_system, wold
from src.measures import lebesgue, linear
from src.utils import make_rng


def left_half(x):
    return (np.asarray(x) < 0.5).astype(float)


@pytest.fixture(scope="module")
def doubling_model(doubling):
    return koopman_system(doubling, lebesgue(), depth=6)


class TestKoopmanModel:
    """Test the cylinder model of f -> f o sigma"""

    def test_level_sizes(self, doubling_model):
        assert [doubling_model.dim(j) for j in range(7)] == [1, 2, 4, 8, 16, 32, 64]
        np.testing.assert_allclose(doubling_model.masses[6], np.full(64, 1.0 / 64))

    def test_isometry_and_adjoint(self, doubling_model):
        assert doubling_model.invariance_residual < 1e-12
        assert is_isometry(doubling_model)
        assert adjoint_residual(doubling_model) < 1e-12

    def test_shift_reads_the_tail_of_the_word(self, doubling_model):
        f = np.arange(2.0)
        Sf = doubling_model.apply_S(f, 2)
        # words (k1, k2) are ordered (0,0), (0,1), (1,0), (1,1)
        np.testing.assert_array_equal(Sf, [0.0, 1.0, 0.0, 1.0])

    def test_non_invariant_measure(self, doubling):
        with pytest.raises(NotInvariantError):
            koopman_system(doubling, linear(), depth=3)

    def test_power_out_of_range(self, doubling_model):
        with pytest.raises(InvalidArgumentError):
            doubling_model.project_onto_past(np.ones(64), 7)


class TestWold:
    """Test the Wold decomposition of the Koopman isometry"""

    def test_doubling_has_one_dimensional_tail(self, doubling):
        K = koopman_system(doubling, lebesgue(), depth=4)
        decomposition = wold(K, 4)
        assert decomposition.passed()
        assert decomposition.h_inf_dim == 1
        assert decomposition.layer_dims == [8, 4, 2, 1]

    def test_twin_doubling_keeps_its_invariant_halves(self, twin_doubling):
        K = koopman_system(twin_doubling, lebesgue(), depth=3)
        decomposition = wold(K, 3)
        assert decomposition.passed()
        assert decomposition.h_inf_dim == 2

    def test_dense_limit(self, doubling):
        K = koopman_system(doubling, lebesgue(), depth=11)
        with pytest.raises(SizeLimitError):
            wold(K, 11)


class TestExactness:
    """Test the norms ||E_n f - mean f||"""

    def test_doubling_forgets_the_first_symbol(self, doubling_model):
        score = exactness_score(doubling_model, left_half, 6)
        assert score.mean == pytest.approx(0.5)
        assert score.norms[0] == pytest.approx(0.5)
        np.testing.assert_allclose(score.norms[1:], 0.0, atol=1e-12)
        assert score.monotone and not score.plateau

    def test_first_conditional_expectation_kills_cosine(self, doubling_model):
        score = exactness_score(doubling_model, lambda x: np.cos(2 * np.pi * np.asarray(x)), 1)
        assert score.norms[1] <= 1e-8

    @pytest.mark.slow
    def test_indicator_at_depth_twelve(self, doubling):
        K = koopman_system(doubling, lebesgue(), depth=12)
        assert K.dim(12) == 4096
        score = exactness_score(K, left_half, 12)
        assert score.monotone
        assert score.norms[-1] < 1e-3

    def test_invariant_set_plateaus(self, twin_doubling):
        K = koopman_system(twin_doubling, lebesgue(), depth=4)
        score = exactness_score(K, left_half, 4)
        np.testing.assert_allclose(score.norms, 0.5, atol=1e-12)
        assert score.plateau

    def test_invertible_map_never_forgets(self):
        K = koopman_system(make_cell_permutation(8), lebesgue(), depth=3)
        values = make_rng(5).standard_normal(K.dim(3))
        score = exactness_score(K, values, 3)
        np.testing.assert_allclose(score.norms, score.norms[0], rtol=1e-10)

    def test_frame(self, doubling_model):
        frame = exactness_score(doubling_model, left_half, 3).to_frame([32, 16, 8])
        assert list(frame.columns) == ["n", "norm", "layer_dim"]
        assert len(frame) == 4
