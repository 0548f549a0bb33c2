import numpy as np
import pytest

from src.markov import riesz_family
from src.measures import AtomicMeasure, act_on_measure, atomic_distance


class TestRieszFamily:
    """Test the kernels x -> mu_x of a transfer operator"""

    def test_doubling_half_at_point(self, half):
        mu_x = riesz_family(half).measure_at(0.6)
        np.testing.assert_allclose(mu_x.locations, [0.3, 0.8])
        np.testing.assert_allclose(mu_x.masses, [0.5, 0.5])

    def test_cos2_at_zero_is_a_dirac(self, cos2):
        assert riesz_family(cos2).measure_at(0.0).atoms() == [(0.0, 1.0)]

    def test_total_mass_is_R_of_one(self, cos2):
        x = np.linspace(0.0, 0.99, 11)
        np.testing.assert_allclose(riesz_family(cos2).total_mass(x), 1.0, atol=1e-14)

    def test_reconstruction(self, cos2):
        family = riesz_family(cos2)
        assert family.reconstruction_residual(np.exp) < 1e-12
        x = np.array([0.6])
        np.testing.assert_allclose(family.reconstruct(np.square, x), cos2.apply(np.square, x), atol=1e-14)

    def test_atoms_map_back_to_x(self, half):
        assert riesz_family(half).pushforward_residual() < 1e-12

    def test_pullout(self, cos2):
        assert riesz_family(cos2).pullout_residual(np.sin, np.cos) < 1e-12

    def test_mixture_is_the_dual_action(self, half):
        nu = AtomicMeasure([0.2, 0.6], [0.25, 0.75])
        mixed = riesz_family(half).mix(nu)
        assert atomic_distance(mixed, act_on_measure(half, nu)) < 1e-12
        assert mixed.total_mass == pytest.approx(1.0)
