import numpy as np
import pytest

from src.core.exceptions import InvalidPartitionError
from src.markov import FiberedOperator, fibered_operator
from src.utils import make_rng


class TestFiberedOperator:
    """Test operators defined by a partition into fibers"""

    def test_singleton_fibers_give_the_identity(self):
        R = fibered_operator(np.arange(8))
        values = make_rng(1).standard_normal(8)
        np.testing.assert_allclose(R.apply(values), values)
        assert R.fixed_space_dimension() == 8

    def test_one_fiber_gives_the_mean(self):
        R = fibered_operator(np.zeros(8, dtype=int))
        values = np.arange(8.0)
        np.testing.assert_allclose(R.apply(values), np.full(8, 3.5))
        assert R.harmonic_space_dimension() == 1

    def test_harmonic_functions_are_fiber_constants(self):
        rng = make_rng(4)
        labels = np.arange(64) // 8
        masses = rng.random(64)
        R = fibered_operator(labels, masses / masses.sum(), rng.random(64) + 0.1)
        assert R.is_normalized()
        assert R.fixed_space_dimension() == 8
        assert R.harmonic_space_dimension() == 8
        assert R.harmonic_residual(rng.standard_normal(8)[labels]) < 1e-12
        assert R.harmonic_residual(np.arange(64.0)) > 0.1

    def test_derivative_is_the_weight(self):
        rng = make_rng(6)
        R = fibered_operator(np.arange(32) % 4, weights=rng.random(32) + 0.5)
        assert R.derivative_residual() < 1e-12
        np.testing.assert_allclose(np.asarray(R.matrix().sum(axis=1)).ravel(), 1.0)

    def test_unnormalized_weights(self):
        R = fibered_operator(np.arange(4) // 2, weights=np.full(4, 2.0), normalize=False)
        assert not R.is_normalized()
        np.testing.assert_allclose(R.fiber_integrals(), [2.0, 2.0])
        assert R.harmonic_space_dimension() == 2

    @pytest.mark.parametrize("labels, masses", [
        (np.array([0, 2, 2]), None),
        (np.array([0.0, 1.0]), None),
        (np.array([-1, 0]), None),
        (np.array([0, 1]), np.array([1.0, 0.0])),
    ])
    def test_invalid_partitions(self, labels, masses):
        with pytest.raises(InvalidPartitionError):
            FiberedOperator(labels, masses)
