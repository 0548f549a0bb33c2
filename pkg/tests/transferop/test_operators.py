import numpy as np
import pytest

from src.core.exceptions import InvalidArgumentError
from src.dynamics import make_gauss
from src.transferop import (
    CombinedTransferOperator,
    ComposedTransferOperator,
    WeightedTransferOperator,
    get_weight,
    make_operator,
)


class TestWeightedOperators:
    """Test R f(x) = sum over preimages of W f"""

    def test_doubling_half_on_identity(self, half):
        assert half.apply(lambda y: y, 0.6) == pytest.approx(0.55)

    def test_vector_input_keeps_shape(self, half):
        x = np.linspace(0.0, 0.9, 10).reshape(2, 5)
        out = half.apply(lambda y: y, x)
        assert out.shape == (2, 5)
        np.testing.assert_allclose(out, x / 2 + 0.25)

    def test_normalized_weights(self, half, cos2, tripling):
        assert half.normalization_residual() < 1e-12
        assert cos2.normalization_residual() < 1e-12
        assert make_operator(tripling, "riesz").normalization_residual() < 1e-12
        assert make_operator(tripling, "uniform").is_normalized()

    def test_perron_frobenius_preserves_lebesgue_not_constants(self, gauss_pf):
        assert not gauss_pf.is_normalized()
        # R 1 (0) = sum 1/k^2 over the kept branches
        expected = np.sum(1.0 / np.arange(1, 1001) ** 2)
        assert gauss_pf.apply(lambda y: np.ones_like(y), 0.0) == pytest.approx(expected)

    def test_pf_of_doubling_is_half(self, doubling, half):
        pf = make_operator(doubling, "pf")
        x = np.linspace(0.0, 0.99, 7)
        np.testing.assert_allclose(pf.apply(np.exp, x), half.apply(np.exp, x))

    def test_custom_expression_matches_registered_weight(self, doubling, cos2):
        custom = make_operator(doubling, "custom", "cos(pi*y)**2")
        x = np.linspace(0.0, 0.99, 7)
        np.testing.assert_allclose(custom.apply(np.sin, x), cos2.apply(np.sin, x), atol=1e-14)

    def test_kernel_zeroes_missing_preimages(self, twin_doubling):
        R = make_operator(twin_doubling, "half")
        _, weights = R.kernel(np.array([0.2]))
        np.testing.assert_allclose(weights[:, 0], [0.5, 0.5, 0.0, 0.0])

    def test_label(self, half):
        assert half.label == "doubling/half"
        assert "doubling/half" in repr(half)


class TestOperatorAlgebra:
    """Test products and positive combinations of operators"""

    def test_product_is_operator_for_the_composite(self, half):
        RR = ComposedTransferOperator(half, half)
        # four preimages under x -> 4x, each with weight 1/4
        assert RR.apply(lambda y: y, 0.6) == pytest.approx(0.6 / 4 + 3 / 8)
        assert RR.sigma(0.3) == pytest.approx(0.2)

    def test_combination_is_normalized(self, half, cos2):
        combined = CombinedTransferOperator(0.25, half, 0.75, cos2)
        assert combined.normalization_residual() < 1e-12

    def test_combination_needs_a_common_map(self, half, tripling):
        with pytest.raises(InvalidArgumentError):
            CombinedTransferOperator(0.5, half, 0.5, make_operator(tripling, "uniform"))
        with pytest.raises(InvalidArgumentError):
            CombinedTransferOperator(-1.0, half, 0.5, half)


class TestWeightRegistry:
    """Test weight lookup by label"""

    def test_unknown_weight(self, doubling):
        assert get_weight("nope", doubling) is None
        with pytest.raises(InvalidArgumentError):
            make_operator(doubling, "nope")

    def test_custom_needs_expression(self, doubling):
        with pytest.raises(InvalidArgumentError):
            make_operator(doubling, "custom")

    def test_tail_bound_is_inherited(self):
        R = WeightedTransferOperator(make_gauss(50), lambda y: np.ones_like(y))
        assert R.tail_mass_bound == pytest.approx(1.0 / 51)
