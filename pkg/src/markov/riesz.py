"""
Riesz families: the transition kernels x -> mu_x with R(f)(x) = int f dmu_x.
"""
from typing import Callable, Tuple

import numpy as np

from config.logging_config import markov_logger as logger
from config.settings import DEFAULT_SAMPLES
from src.measures.measures import AtomicMeasure
from src.transferop.base_operator import BaseTransferOperator
from src.utils.sampling import quasi_random_points

GridFn = Callable[[np.ndarray], np.ndarray]


class RieszFamily:
    """
    mu_x puts mass W(tau_k x) on each preimage tau_k x.

    Atoms come in branch order, which fixes the order used when sampling.
    """

    def __init__(self, operator: BaseTransferOperator):
        self.operator = operator
        if operator.tail_mass_bound > 0:
            logger.warning(f"{operator.label}: truncated kernel, each mu_x misses up to "
                           f"{operator.tail_mass_bound:.3e} of its mass")

    @property
    def label(self) -> str:
        return self.operator.label

    def sigma(self, y):
        return self.operator.sigma(y)

    def atoms(self, x) -> Tuple[np.ndarray, np.ndarray]:
        """Preimage points and masses, shape (K, m), rows in branch order."""
        return self.operator.kernel(np.atleast_1d(np.asarray(x, dtype=float)))

    def measure_at(self, x: float) -> AtomicMeasure:
        points, weights = self.atoms(x)
        keep = weights[:, 0] > 0
        return AtomicMeasure(points[keep, 0], weights[keep, 0])

    def total_mass(self, x) -> np.ndarray:
        """mu_x(X), which equals R(1)(x)."""
        return self.atoms(x)[1].sum(axis=0)

    def reconstruct(self, f: GridFn, x) -> np.ndarray:
        """int f dmu_x, atom by atom."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return np.array([self.measure_at(point).integrate(f) for point in x])

    def reconstruction_residual(self, f: GridFn, samples: int = 100, seed: int = 0) -> float:
        x = quasi_random_points(samples, seed)
        return float(np.max(np.abs(self.reconstruct(f, x) - self.operator.apply(f, x))))

    def pushforward_residual(self, samples: int = 100, seed: int = 0) -> float:
        """
        Distance of mu_x o sigma^{-1} from delta_x: every atom maps back to x and
        the total mass is one.
        """
        x = quasi_random_points(samples, seed)
        points, weights = self.atoms(x)
        images = np.asarray(self.sigma(points.reshape(-1)), dtype=float).reshape(points.shape)
        drift = np.where(weights > 0, np.abs(images - x[None, :]), 0.0)
        return float(max(drift.max(), np.max(np.abs(weights.sum(axis=0) - 1.0))))

    def pullout_residual(self, f: GridFn, g: GridFn, samples: int = DEFAULT_SAMPLES, seed: int = 0) -> float:
        """max |int (f o sigma) g dmu_x - f(x) int g dmu_x| over sample points."""
        x = quasi_random_points(samples, seed)
        points, weights = self.atoms(x)
        flat = points.reshape(-1)
        f_sigma = np.asarray(f(np.asarray(self.sigma(flat), dtype=float)), dtype=float).reshape(points.shape)
        g_values = np.asarray(g(flat), dtype=float).reshape(points.shape)
        lhs = np.where(weights > 0, weights * f_sigma * g_values, 0.0).sum(axis=0)
        rhs = np.asarray(f(x), dtype=float) * np.where(weights > 0, weights * g_values, 0.0).sum(axis=0)
        return float(np.max(np.abs(lhs - rhs)))

    def mix(self, nu: AtomicMeasure) -> AtomicMeasure:
        """lambda = int mu_x dnu(x), which equals nu R."""
        locations, masses = [], []
        for x, mass in nu.atoms():
            family = self.measure_at(x)
            locations.append(family.locations)
            masses.append(family.masses * mass)
        if not locations:
            return AtomicMeasure([], [])
        return AtomicMeasure(np.concatenate(locations), np.concatenate(masses))


def riesz_family(R: BaseTransferOperator) -> RieszFamily:
    return RieszFamily(R)
