import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core.exceptions import InvalidWordError, TailEscapeError
from src.dynamics import admissible_words, decode, encode, make_doubling


class TestEncodeDecode:
    """Test itineraries and cylinder intervals"""

    def test_doubling_itinerary(self, doubling):
        assert encode(doubling, 0.3, 3) == (0, 1, 0)

    def test_gauss_itinerary_of_silver_ratio(self, gauss):
        assert encode(gauss, np.sqrt(2.0) - 1.0, 3) == (2, 2, 2)

    def test_doubling_cylinder(self, doubling):
        np.testing.assert_allclose(decode(doubling, (0, 1)), (0.25, 0.5))

    def test_gauss_cylinder(self, gauss):
        np.testing.assert_allclose(decode(gauss, (1, 1)), (0.5, 2.0 / 3.0))

    def test_empty_word(self, doubling):
        assert decode(doubling, ()) == (0.0, 1.0)

    def test_twin_doubling_admissibility(self, twin_doubling):
        np.testing.assert_allclose(decode(twin_doubling, (0, 1)), (0.125, 0.25))
        assert encode(twin_doubling, 0.2, 2) == (0, 1)
        with pytest.raises(InvalidWordError):
            decode(twin_doubling, (0, 2))

    def test_unknown_symbol(self, doubling):
        with pytest.raises(InvalidWordError):
            decode(doubling, (0, 5))

    def test_tail_escape_reports_the_step(self, gauss):
        # 1/(500 + 1e-6) codes to 500, then sigma lands next to 0
        x = float(gauss.tau(500, 1e-6))
        with pytest.raises(TailEscapeError) as info:
            encode(gauss, x, 3)
        assert info.value.step == 2

    @settings(max_examples=200, deadline=None)
    @given(st.floats(min_value=0.0, max_value=1.0, exclude_max=True))
    def test_point_lies_in_its_cylinder(self, x):
        doubling = make_doubling()
        word = encode(doubling, x, 8)
        assert decode(doubling, word).contains(x)
        np.testing.assert_allclose(decode(doubling, word).length, 2.0 ** -8)


class TestAdmissibleWords:
    """Test enumeration of admissible words"""

    def test_full_shift(self, doubling):
        assert admissible_words(doubling, 2) == [(0, 0), (0, 1), (1, 0), (1, 1)]
        assert admissible_words(doubling, 0) == [()]

    def test_subshift(self, twin_doubling):
        words = admissible_words(twin_doubling, 2)
        assert len(words) == 8
        assert (0, 2) not in words
        assert (2, 3) in words

    def test_k_limit_on_countable_map(self, gauss):
        words = admissible_words(gauss, 2, k_limit=3)
        assert len(words) == 9
        assert words[0] == (1, 1)
        assert words[-1] == (3, 3)
