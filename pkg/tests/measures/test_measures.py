import numpy as np
import pytest

from src.core.exceptions import InvalidArgumentError
from src.measures import (
    AtomicMeasure,
    HistogramMeasure,
    atomic_distance,
    discretize,
    from_dict,
    gauss_mu0,
    get_measure,
    lebesgue,
    linear,
    riesz_partial,
    riesz_partial_mass,
)


class TestHistogramMeasure:
    """Test piecewise-constant measures on the grid"""

    def test_cdf_is_linear_inside_cells(self):
        mu = HistogramMeasure(np.array([0.25, 0.75]))
        assert mu.cdf(0.25) == pytest.approx(0.125)
        assert mu.mass(0.25, 0.75) == pytest.approx(0.5)
        np.testing.assert_allclose(mu.density, [0.5, 1.5])

    def test_integrate_against_density(self):
        mu = HistogramMeasure(np.array([0.0, 1.0]))
        assert mu.integrate(lambda x: x) == pytest.approx(0.75)
        assert mu.mean() == pytest.approx(0.75)

    def test_normalized(self):
        assert HistogramMeasure(np.array([1.0, 3.0])).normalized().total_mass == pytest.approx(1.0)

    def test_rejects_negative_masses(self):
        with pytest.raises(InvalidArgumentError):
            HistogramMeasure(np.array([0.5, -0.1]))

    def test_rejects_zero_mass(self):
        with pytest.raises(InvalidArgumentError):
            HistogramMeasure(np.zeros(4))


class TestAtomicMeasure:
    """Test finite atomic measures"""

    def test_close_atoms_merge(self):
        mu = AtomicMeasure([0.5, 0.5 + 1e-13, 0.25], [1.0, 1.0, 0.5])
        assert mu.size == 2
        assert mu.mass_at(0.5) == pytest.approx(2.0)
        assert mu.atoms()[0] == (0.25, 0.5)

    def test_negligible_atoms_are_pruned(self):
        mu = AtomicMeasure([0.1, 0.9], [1.0, 1e-16])
        assert mu.atoms() == [(0.1, 1.0)]

    def test_cdf_includes_the_atom(self):
        mu = AtomicMeasure([0.0, 0.5], [0.5, 0.5])
        assert mu.cdf(0.0) == pytest.approx(0.5)
        assert mu.mass(0.0, 0.5) == pytest.approx(0.5)
        assert mu.integrate(lambda x: x) == pytest.approx(0.25)

    def test_distance(self):
        first = AtomicMeasure([0.0, 0.5], [0.5, 0.5])
        assert atomic_distance(first, AtomicMeasure.dirac(0.0)) == pytest.approx(1.0)
        assert first.is_close(AtomicMeasure.from_atoms([(0.5, 0.5), (0.0, 0.5)]))

    def test_location_outside_unit_interval(self):
        with pytest.raises(InvalidArgumentError):
            AtomicMeasure([1.5], [1.0])


class TestClosedFormMeasures:
    """Test measures with closed-form densities"""

    def test_gauss_mass_of_first_branch(self):
        assert gauss_mu0().mass(0.5, 1.0) == pytest.approx(np.log2(4.0 / 3.0))
        assert gauss_mu0().total_mass == pytest.approx(1.0)

    def test_integrals(self):
        assert lebesgue().integrate(np.square) == pytest.approx(1.0 / 3.0)
        assert linear().mean() == pytest.approx(2.0 / 3.0)

    def test_riesz_partial_is_a_probability(self):
        mu = riesz_partial(2)
        assert mu.total_mass == pytest.approx(1.0, abs=1e-10)
        assert mu.integrate(lambda x: np.ones_like(x)) == pytest.approx(1.0, abs=1e-8)
        assert riesz_partial_mass(3) == pytest.approx(1.0, abs=1e-12)

    def test_discretize(self):
        np.testing.assert_allclose(discretize(lebesgue(), 4).masses, np.full(4, 0.25))
        np.testing.assert_allclose(discretize(AtomicMeasure([0.1, 0.6], [0.3, 0.7]), 2).masses, [0.3, 0.7])
        np.testing.assert_allclose(discretize(gauss_mu0(), 2).masses, [np.log2(1.5), np.log2(4.0 / 3.0)])

    def test_registry(self):
        assert get_measure("mu0").label == "gauss_mu0"
        assert get_measure("cantor") is None

    def test_from_dict(self):
        mu = from_dict(riesz_partial(2).to_dict())
        assert mu.params == {"n": 2, "start": 1}
        atoms = from_dict(AtomicMeasure.dirac(0.5).to_dict())
        assert atoms.atoms() == [(0.5, 1.0)]
        with pytest.raises(InvalidArgumentError):
            from_dict({"kind": "cantor"})
