import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from config.settings import ARITHMETIC_TOL
from src.dynamics import make_doubling, make_gauss
from src.transferop import check_pullout, kernel_decompose, make_operator
from src.utils import quasi_random_points

DOUBLING = make_doubling()
OPERATORS = {
    "half": make_operator(DOUBLING, "half"),
    "cos2": make_operator(DOUBLING, "cos2"),
    "pf": make_operator(make_gauss(1000), "pf"),
}
SAMPLES = quasi_random_points(100, seed=3)

coefficients = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)


class TestPullOutProperty:
    """Test the pull-out identity on random trigonometric-polynomial pairs"""

    @pytest.mark.parametrize("label", ["half", "cos2", "pf"])
    @settings(max_examples=100, deadline=None)
    @given(a=coefficients, b=coefficients, c=st.floats(min_value=-2.0, max_value=2.0, allow_nan=False),
           seed=st.integers(min_value=0, max_value=1 << 16))
    def test_pullout(self, label, a, b, c, seed):
        R = OPERATORS[label]
        f = lambda y: a * np.cos(2 * np.pi * np.asarray(y)) + b * np.asarray(y) ** 2
        g = lambda y: np.exp(c * np.asarray(y))
        # 100 draws of 100 points each
        assert check_pullout(R, f, g, samples=100, seed=seed) < ARITHMETIC_TOL


class TestKernelDecompositionProperty:
    """Test f0 in ker R and the idempotence of the split"""

    @settings(max_examples=1000, deadline=None)
    @given(label=st.sampled_from(["half", "cos2"]), j=st.integers(min_value=1, max_value=5),
           a=coefficients, b=coefficients)
    def test_split(self, label, j, a, b):
        R = OPERATORS[label]
        f = lambda y: a * np.sin(2 * np.pi * j * np.asarray(y)) + b * np.asarray(y) ** j
        f0, fbar = kernel_decompose(R, f)
        np.testing.assert_allclose(R.apply(f0, SAMPLES), 0.0, atol=ARITHMETIC_TOL)
        np.testing.assert_allclose(f0(SAMPLES) + fbar(SAMPLES), f(SAMPLES), atol=1e-12)
        refined, _ = kernel_decompose(R, f0)
        np.testing.assert_allclose(refined(SAMPLES), f0(SAMPLES), atol=ARITHMETIC_TOL)
