import numpy as np
import pytest

from src.core.exceptions import InvalidArgumentError, InvalidWordError, TailEscapeError
from src.dynamics import get_map, make_affine_map, make_cell_permutation, make_gauss


class TestAffineMaps:
    """Test the piecewise-affine maps built by the factory"""

    def test_doubling_inverse_branches(self, doubling):
        np.testing.assert_allclose(doubling.tau(0, 0.6), 0.3)
        np.testing.assert_allclose(doubling.tau(1, 0.6), 0.8)
        assert doubling.is_full
        assert not doubling.is_countable

    def test_sigma_is_left_inverse_of_tau(self, doubling, tripling):
        x = np.linspace(0.0, 0.99, 50)
        for branch_map in (doubling, tripling):
            for k in branch_map.indices:
                np.testing.assert_allclose(branch_map.sigma(branch_map.tau(k, x)), x, atol=1e-12)

    def test_branch_of_uses_half_open_intervals(self, doubling):
        np.testing.assert_array_equal(doubling.labels_of([0.0, 0.49, 0.5, 0.99]), [0, 0, 1, 1])
        assert doubling.branch_interval(1) == (0.5, 1.0)

    def test_twin_doubling_is_not_full(self, twin_doubling):
        assert not twin_doubling.is_full
        assert twin_doubling.image_interval(1) == (0.0, 0.5)
        np.testing.assert_allclose(twin_doubling.sigma(0.3), 0.1)

    def test_preimages_mark_points_outside_the_image(self, twin_doubling):
        points, valid = twin_doubling.preimages(np.array([0.2, 0.7]))
        assert points.shape == (4, 2)
        np.testing.assert_array_equal(valid[:, 0], [True, True, False, False])
        np.testing.assert_array_equal(valid[:, 1], [False, False, True, True])
        np.testing.assert_allclose(points[0, 0], 0.1)

    def test_cell_permutation_shifts_cells(self):
        perm_map = make_cell_permutation(4)
        assert perm_map.label == "permutation_4"
        np.testing.assert_allclose(perm_map.sigma(0.1), 0.35)
        np.testing.assert_allclose(perm_map.sigma(0.8), 0.05)

    def test_invalid_permutation_is_rejected(self):
        with pytest.raises(InvalidArgumentError):
            make_cell_permutation(4, [0, 0, 1, 2])

    def test_gap_between_branches_is_rejected(self):
        with pytest.raises(InvalidArgumentError):
            make_affine_map("gappy", [0.0, 0.6], [0.5, 1.0], [0.0, 0.0], [1.0, 1.0])

    def test_unknown_label(self, doubling):
        with pytest.raises(InvalidWordError):
            doubling.tau(2, 0.5)


class TestGaussMap:
    """Test the truncated Gauss map"""

    def test_inverse_branch_value(self, gauss):
        np.testing.assert_allclose(gauss.tau(2, 0.5), 0.4)
        np.testing.assert_allclose(gauss.sigma(0.4), 0.5)

    def test_branches_are_closed_on_the_right(self, gauss):
        np.testing.assert_array_equal(gauss.labels_of([1.0, 0.5, 0.4]), [1, 2, 2])

    def test_tail_bound(self, gauss):
        assert gauss.k_max == 1000
        np.testing.assert_allclose(gauss.tail_mass_bound, 1.0 / 1001)
        assert gauss.branch_count == 1000

    def test_tail_escape(self, gauss):
        assert gauss.branch_of(1e-4) == -1
        with pytest.raises(TailEscapeError):
            gauss.sigma(1e-4)

    def test_inverse_slope(self, gauss):
        # |tau_1'(x)| = 1 / (1 + x)^2 at x = sigma(y)
        y = 0.8
        np.testing.assert_allclose(gauss.inverse_slope_at(y), y ** 2)

    @pytest.mark.parametrize("k_max", [0, -3, 2.5])
    def test_invalid_k_max(self, k_max):
        with pytest.raises(InvalidArgumentError):
            make_gauss(k_max)


class TestRegistry:
    """Test map lookup by label"""

    def test_known_label_with_parameters(self):
        assert get_map("Gauss", k_max=10).branch_count == 10
        assert get_map("doubling").label == "doubling"

    def test_unknown_label_returns_none(self):
        assert get_map("tent") is None
