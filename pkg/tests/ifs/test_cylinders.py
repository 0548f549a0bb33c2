import numpy as np
import pytest

from src.core.exceptions import InvalidArgumentError, InvalidWordError, SizeLimitError
from src.ifs import ProbabilityVector, gauss_branch_masses, ifs_measure_cylinders


@pytest.fixture
def skewed(doubling):
    return ifs_measure_cylinders(doubling, ProbabilityVector.from_values([0.25, 0.75]), depth=6)


class TestProbabilityVector:
    """Test branch probability vectors"""

    def test_must_sum_to_one(self):
        with pytest.raises(InvalidArgumentError):
            ProbabilityVector.from_values([0.5, 0.6])
        with pytest.raises(InvalidArgumentError):
            ProbabilityVector.from_values([1.5, -0.5])

    def test_word_mass(self):
        p = ProbabilityVector.from_values([0.25, 0.75])
        assert p.word_mass([1, 1]) == pytest.approx(9.0 / 16.0)
        assert p.is_positive and not p.is_truncated

    def test_gauss_masses_telescope(self):
        p = gauss_branch_masses(1000)
        assert p.p[0] == pytest.approx(np.log2(4.0 / 3.0))
        assert p.p.sum() + p.tail_mass == pytest.approx(1.0, abs=1e-12)
        assert p.is_truncated
        np.testing.assert_allclose(p.sampling_weights().sum(), 1.0)


class TestCylinderTable:
    """Test IFS measures tabulated on cylinders"""

    def test_word_masses_are_products(self, skewed):
        assert skewed.word_mass((1, 1)) == pytest.approx(9.0 / 16.0)
        assert skewed.word_mass((0, 1)) == pytest.approx(3.0 / 16.0)
        assert skewed.word_mass(()) == 1.0

    def test_cylinder_intervals_carry_their_mass(self, skewed):
        assert skewed.cylinder_mass((0, 1)) == pytest.approx(3.0 / 16.0)
        assert skewed.total_mass == pytest.approx(1.0)

    def test_kolmogorov_consistency(self, skewed):
        assert skewed.kolmogorov_residual() < 1e-15

    def test_sigma_invariance(self, skewed):
        check = skewed.invariance_check(64)
        assert check.passed, check.detail

    def test_fair_coin_gives_lebesgue(self, doubling):
        table = ifs_measure_cylinders(doubling, ProbabilityVector.uniform(2), depth=3)
        np.testing.assert_allclose(table.histogram(8).masses, np.full(8, 0.125))
        assert table.mean() == pytest.approx(0.5)

    def test_tree(self, skewed):
        tree = skewed.to_tree(max_depth=1)
        assert tree["mass"] == 1.0
        assert [child["word"] for child in tree["children"]] == [[0], [1]]
        assert "children" not in tree["children"][0]

    def test_write_tree(self, skewed, tmp_path):
        path = skewed.write_tree(tmp_path / "tree.json", max_depth=2)
        assert path.exists()

    def test_word_deeper_than_table(self, skewed):
        with pytest.raises(InvalidWordError):
            skewed.word_mass((0,) * 7)

    def test_size_limit(self, gauss):
        with pytest.raises(SizeLimitError):
            ifs_measure_cylinders(gauss, gauss_branch_masses(1000), depth=3)

    def test_needs_full_branches(self, twin_doubling):
        with pytest.raises(InvalidArgumentError):
            ifs_measure_cylinders(twin_doubling, ProbabilityVector.uniform(4), depth=2)

    def test_p_must_match_branches(self, tripling):
        with pytest.raises(InvalidArgumentError):
            ifs_measure_cylinders(tripling, ProbabilityVector.uniform(2), depth=2)
