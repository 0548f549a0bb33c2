"""
Parry Jacobian of a branch map with respect to a histogram measure.

On each branch interval J_k, J = d(mu o sigma)/dmu. It is computed on the
pieces P = (grid cell) cap J_k as J(P) = mu(sigma_k P) / mu(P), so the
reciprocal 1/J(y) is d(mu o tau_k)/dmu read at x = sigma(y). The pushforward
density then satisfies

    theta(x) = d(mu o sigma^{-1})/dmu (x) = sum_{y in sigma^{-1} x} 1/J(y),

which is checked against the exact pushforward matrix. The identity with
1/J evaluated at x instead of y is reported alongside.
"""
from dataclasses import dataclass
from typing import Dict

import numpy as np

from config.logging_config import markov_logger as logger
from src.core.checks import CheckResult
from src.core.exceptions import AbsoluteContinuityError
from src.dynamics.branch_map import BranchMap
from src.measures.measures import HistogramMeasure
from src.measures.ulam import pushforward_matrix
from src.transferop.operators import WeightedTransferOperator
from src.utils.grid import FunctionOnGrid, cell_edges, cell_midpoints, cell_of
from src.utils.validators import require_positive_int


@dataclass(frozen=True)
class ParryJacobian:
    """J on sorted y-pieces; `lower` holds the left end of each piece."""

    branch_map: BranchMap
    mu: HistogramMeasure
    lower: np.ndarray
    values: np.ndarray

    @property
    def n(self) -> int:
        return self.mu.n

    def __call__(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        index = np.clip(np.searchsorted(self.lower, y, side="right") - 1, 0, self.lower.size - 1)
        return self.values[index]

    def on_grid(self) -> FunctionOnGrid:
        return FunctionOnGrid(self(cell_midpoints(self.n)))

    def theta(self, x) -> np.ndarray:
        """sum over preimages y of x of 1/J(y)."""
        points, valid = self.branch_map.preimages(x)
        return np.where(valid, 1.0 / self(points), 0.0).sum(axis=0)

    def theta_at_x(self, x) -> np.ndarray:
        """The same sum with 1/J read at x itself."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        _, valid = self.branch_map.preimages(x)
        return valid.sum(axis=0) / self(x)

    def oracle(self) -> np.ndarray:
        """d(mu o sigma^{-1})/dmu per cell from the exact pushforward matrix."""
        image = pushforward_matrix(self.branch_map, self.n).act(self.mu.masses)
        return image / self.mu.masses

    def residuals(self) -> Dict[str, float]:
        """mu-weighted L1 distance of each reading from the oracle."""
        midpoints = cell_midpoints(self.n)
        oracle = self.oracle()
        weights = self.mu.masses / self.mu.total_mass
        return {
            "y_reading": float(np.dot(weights, np.abs(self.theta(midpoints) - oracle))),
            "x_reading": float(np.dot(weights, np.abs(self.theta_at_x(midpoints) - oracle))),
        }

    def identity_check(self, tol: float) -> CheckResult:
        residuals = self.residuals()
        return CheckResult.from_residual(
            "parry.theta_identity", residuals["y_reading"], tol,
            f"x-reading residual {residuals['x_reading']:.3e}",
        )

    def operator(self) -> WeightedTransferOperator:
        """R f(x) = sum_y f(y) / J(y); R(1) = theta."""
        return WeightedTransferOperator(self.branch_map, lambda y: 1.0 / self(y), "parry")

    def normalization_residual(self) -> float:
        """mu-weighted L1 distance of R(1) from the pushforward density."""
        midpoints = cell_midpoints(self.n)
        weights = self.mu.masses / self.mu.total_mass
        return float(np.dot(weights, np.abs(self.operator().apply(np.ones_like, midpoints) - self.oracle())))


def parry_jacobian(branch_map: BranchMap, mu: HistogramMeasure) -> ParryJacobian:
    """
    Build J for a histogram measure.

    Raises:
        AbsoluteContinuityError: If a piece of some branch, or its image, has
            zero mu-mass (J would be 0/0 or infinite there)
    """
    n = require_positive_int(mu.n, "n", minimum=2)
    if np.any(mu.masses <= 0):
        raise AbsoluteContinuityError(np.flatnonzero(mu.masses <= 0), "the measure must charge every cell")
    edges = cell_edges(n)
    lowers, values = [], []
    bad_cells = []
    for pos in range(branch_map.branch_count):
        lo, hi = branch_map.lower[pos], branch_map.upper[pos]
        cuts = np.unique(np.concatenate(([lo, hi], edges[(edges > lo) & (edges < hi)])))
        a, b = cuts[:-1], cuts[1:]
        positions = np.full(a.shape, pos)
        fa = branch_map.forward_fn(positions, a)
        fb = branch_map.forward_fn(positions, b)
        piece_mass = mu.mass(a, b)
        image_mass = mu.mass(np.minimum(fa, fb), np.maximum(fa, fb))
        degenerate = (piece_mass <= 0) | (image_mass <= 0)
        if degenerate.any():
            bad_cells.extend(cell_of(0.5 * (a + b)[degenerate], n).tolist())
            continue
        lowers.append(a)
        values.append(image_mass / piece_mass)
    if bad_cells:
        raise AbsoluteContinuityError(sorted(set(bad_cells)), f"{branch_map.label}: zero-mass piece on a branch")

    lower = np.concatenate(lowers)
    values = np.concatenate(values)
    order = np.argsort(lower, kind="stable")
    jacobian = ParryJacobian(branch_map, mu, lower[order], values[order])
    logger.info(f"Parry Jacobian {branch_map.label} n={n}: {lower.size} pieces, "
                f"J in [{values.min():.4g}, {values.max():.4g}]")
    return jacobian
