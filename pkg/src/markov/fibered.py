"""
Operators built from a partition of the grid into fibers.

For a partition C of the n cells, a measure mu and a weight W,

    R_W(f)(x) = int_{C(x)} f W dmu_{C(x)},

where mu_C is mu conditioned on the fiber C. R_W is normalized when
int_C W dmu_C = 1 on every fiber; its harmonic functions are then exactly
the functions constant on fibers, and d(mu R_W)/dmu = W.
"""
from typing import Optional, Sequence

import numpy as np
from scipy import sparse

from config.logging_config import markov_logger as logger
from config.settings import ARITHMETIC_TOL
from src.core.exceptions import InvalidArgumentError, InvalidPartitionError
from src.utils.validators import require_nonnegative_array


class FiberedOperator:
    """
    Args:
        labels: labels[c] is the fiber of cell c; fibers are numbered 0..F-1 and none may be empty
        masses: Cell masses of mu (default uniform)
        weights: W on each cell (default 1)
    """

    def __init__(self, labels: Sequence[int], masses: Optional[Sequence[float]] = None,
                 weights: Optional[Sequence[float]] = None):
        labels = np.asarray(labels)
        if labels.ndim != 1 or labels.size == 0 or not np.issubdtype(labels.dtype, np.integer):
            raise InvalidPartitionError("fiber labels must be a non-empty 1-d integer array")
        if labels.min() < 0:
            raise InvalidPartitionError("fiber labels must be nonnegative")
        n = labels.size
        masses = np.full(n, 1.0 / n) if masses is None else require_nonnegative_array(masses, "cell masses")
        weights = np.ones(n) if weights is None else require_nonnegative_array(weights, "fiber weight")
        if masses.shape != (n,) or weights.shape != (n,):
            raise InvalidArgumentError("masses and weights must have one entry per cell")

        fiber_count = int(labels.max()) + 1
        sizes = np.bincount(labels, minlength=fiber_count)
        empty = np.flatnonzero(sizes == 0)
        if empty.size:
            raise InvalidPartitionError(f"empty fiber(s): {empty.tolist()}")
        fiber_mass = np.bincount(labels, weights=masses, minlength=fiber_count)
        massless = np.flatnonzero(fiber_mass <= 0)
        if massless.size:
            raise InvalidPartitionError(f"fiber(s) with zero mu-mass: {massless.tolist()}")

        self.labels = labels.astype(np.int64)
        self.masses = masses
        self.weights = weights
        self.fiber_mass = fiber_mass
        self.conditional = masses / fiber_mass[self.labels]

    @property
    def n(self) -> int:
        return int(self.labels.size)

    @property
    def fiber_count(self) -> int:
        return int(self.fiber_mass.size)

    def fiber_integrals(self) -> np.ndarray:
        """int_C W dmu_C per fiber."""
        return np.bincount(self.labels, weights=self.weights * self.conditional, minlength=self.fiber_count)

    def is_normalized(self, tol: float = ARITHMETIC_TOL) -> bool:
        return bool(np.max(np.abs(self.fiber_integrals() - 1.0)) <= tol)

    def normalize(self) -> "FiberedOperator":
        """Rescale W on each fiber so that R_W(1) = 1."""
        integrals = self.fiber_integrals()
        if np.any(integrals <= 0):
            raise InvalidArgumentError("W vanishes mu-a.e. on some fiber and cannot be normalized")
        return FiberedOperator(self.labels, self.masses, self.weights / integrals[self.labels])

    def apply(self, values: Sequence[float]) -> np.ndarray:
        values = np.asarray(values, dtype=float)
        if values.shape != (self.n,):
            raise InvalidArgumentError(f"expected {self.n} cell values, got shape {values.shape}")
        per_fiber = np.bincount(self.labels, weights=values * self.weights * self.conditional,
                                minlength=self.fiber_count)
        return per_fiber[self.labels]

    def matrix(self) -> sparse.csr_matrix:
        """M[x, c] = W(c) mu_C(c) for c in the fiber of x."""
        rows, cols = [], []
        for fiber in range(self.fiber_count):
            members = np.flatnonzero(self.labels == fiber)
            r, c = np.meshgrid(members, members, indexing="ij")
            rows.append(r.reshape(-1))
            cols.append(c.reshape(-1))
        rows = np.concatenate(rows)
        cols = np.concatenate(cols)
        values = (self.weights * self.conditional)[cols]
        return sparse.csr_matrix((values, (rows, cols)), shape=(self.n, self.n))

    def harmonic_residual(self, h: Sequence[float]) -> float:
        h = np.asarray(h, dtype=float)
        return float(np.max(np.abs(self.apply(h) - h)))

    def harmonic_space_dimension(self) -> int:
        """Dimension of {h : R_W h = h}: one per fiber once R_W is normalized."""
        if not self.is_normalized():
            logger.warning("harmonic space of an unnormalized fibered operator; normalizing first")
            return self.normalize().harmonic_space_dimension()
        return self.fiber_count

    def fixed_space_dimension(self, tol: float = 1e-8) -> int:
        """dim ker(M - I) computed from the singular values of the dense matrix."""
        M = self.matrix().toarray() - np.eye(self.n)
        singular = np.linalg.svd(M, compute_uv=False)
        return int(np.sum(singular <= tol))

    def dual_image(self) -> np.ndarray:
        """Cell masses of mu R_W."""
        return np.asarray(self.masses @ self.matrix()).reshape(-1)

    def derivative_residual(self) -> float:
        """max |d(mu R_W)/dmu - W| over cells with positive mass."""
        image = self.dual_image()
        positive = self.masses > 0
        return float(np.max(np.abs(image[positive] / self.masses[positive] - self.weights[positive])))


def fibered_operator(labels: Sequence[int], masses: Optional[Sequence[float]] = None,
                     weights: Optional[Sequence[float]] = None, normalize: bool = True) -> FiberedOperator:
    operator = FiberedOperator(labels, masses, weights)
    return operator.normalize() if normalize else operator
