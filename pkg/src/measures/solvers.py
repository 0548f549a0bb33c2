"""
Fixed points of the discretized actions: invariant densities (mu M = mu) and
harmonic functions (M^T h = h).
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.sparse.linalg import ArpackError, ArpackNoConvergence, eigs

from config.logging_config import measure_logger as logger
from config.settings import ARITHMETIC_TOL
from src.core.exceptions import NoConvergenceError
from src.utils.grid import FunctionOnGrid
from .measures import HistogramMeasure
from .ulam import UlamMatrix

_DENSE_EIG_LIMIT = 1024
_UNIQUENESS_GAP = 1e-6


@dataclass(frozen=True)
class FixedPointResult:
    measure: HistogramMeasure
    residual: float
    iterations: int
    second_eigenvalue: Optional[complex] = None

    @property
    def spectral_gap(self) -> Optional[float]:
        if self.second_eigenvalue is None:
            return None
        return float(abs(self.second_eigenvalue - 1.0))

    @property
    def unique(self) -> bool:
        """False when a second eigenvalue sits within 1e-6 of 1."""
        gap = self.spectral_gap
        return gap is None or gap > _UNIQUENESS_GAP


@dataclass(frozen=True)
class HarmonicResult:
    function: FunctionOnGrid
    eigenvalue: float
    residual: float
    iterations: int


def second_eigenvalue(M: UlamMatrix) -> Optional[complex]:
    """
    The eigenvalue of M second closest to 1.

    Dense for small grids, ARPACK otherwise with a dense fallback.
    """
    if M.n < 3:
        return None
    if M.n <= _DENSE_EIG_LIMIT:
        values = np.linalg.eigvals(M.to_dense())
    else:
        try:
            values = eigs(M.matrix, k=6, which="LM", return_eigenvectors=False, tol=1e-10)
        except (ArpackNoConvergence, ArpackError) as e:
            logger.warning(f"ARPACK failed on {M.map_label} n={M.n} ({e}); using dense eigenvalues")
            values = np.linalg.eigvals(M.to_dense())
    order = np.argsort(np.abs(values - 1.0))
    return complex(values[order[1]])


def _l1(a: np.ndarray) -> float:
    return float(np.abs(a).sum())


def invariant_density(M: UlamMatrix, tol: float = ARITHMETIC_TOL, max_iter: int = 10_000,
                      check_uniqueness: bool = True) -> FixedPointResult:
    """
    Probability histogram mu with ||mu M - mu||_1 <= tol by power iteration.

    Iteration starts from the uniform vector and renormalizes to mass one
    after each step, so mass lost through a truncated tail does not drain the
    iterate.

    Raises:
        NoConvergenceError: If the residual is still above tol after max_iter steps
    """
    v = np.full(M.n, 1.0 / M.n)
    residual = np.inf
    for iteration in range(1, max_iter + 1):
        image = M.act(v)
        total = image.sum()
        image = image / total
        residual = _l1(image - v)
        v = image
        if iteration % 100 == 0:
            logger.debug(f"power iteration {M.map_label}/{M.weight_label}: step {iteration}, residual {residual:.3e}")
        if residual <= tol:
            break
    else:
        raise NoConvergenceError(residual, max_iter)

    if M.tail_mass_bound > 0:
        logger.warning(
            f"{M.map_label}: tail mass {M.tail_mass_bound:.3e} renormalized at every step"
        )
    eigenvalue = second_eigenvalue(M) if check_uniqueness else None
    result = FixedPointResult(HistogramMeasure(v), residual, iteration, eigenvalue)
    if not result.unique:
        logger.warning(
            f"{M.map_label}/{M.weight_label}: eigenvalue {eigenvalue:.6g} within {_UNIQUENESS_GAP:g} of 1; "
            f"the invariant density is not unique and power iteration returned a mixture"
        )
    logger.info(f"invariant density {M.map_label}/{M.weight_label} n={M.n}: "
                f"residual {residual:.3e} after {iteration} steps")
    return result


def harmonic_function(M: UlamMatrix, tol: float = ARITHMETIC_TOL, max_iter: int = 10_000) -> HarmonicResult:
    """
    Nonnegative h with M^T h = lambda h, normalized to mean one.

    lambda is 1 for a normalized operator; it is reported so that truncated
    operators can be judged against their tail bound.

    Raises:
        NoConvergenceError: If the residual stays above tol
    """
    h = np.ones(M.n)
    eigenvalue = 1.0
    residual = np.inf
    for iteration in range(1, max_iter + 1):
        image = M.function_action(h)
        eigenvalue = float(image.mean() / h.mean())
        image = image / image.mean()
        residual = float(np.max(np.abs(image - h)))
        h = image
        if residual <= tol:
            break
    else:
        raise NoConvergenceError(residual, max_iter)
    image = M.function_action(h)
    eigenvalue = float(image.mean() / h.mean())
    # ||M^T h - lambda h|| for the h that is returned
    residual = float(np.max(np.abs(image - eigenvalue * h)))
    logger.info(f"harmonic function {M.map_label}/{M.weight_label} n={M.n}: "
                f"eigenvalue {eigenvalue:.12g}, residual {residual:.3e}")
    return HarmonicResult(FunctionOnGrid(h), eigenvalue, residual, iteration)


def harmonic_invariance_residual(pushforward: UlamMatrix, h: FunctionOnGrid, mu: HistogramMeasure) -> float:
    """
    L1 distance between h dmu and its pushforward under sigma.

    When mu R = mu and R h = h, the measure h dmu is sigma-invariant.
    """
    masses = h.values * mu.masses
    masses = masses / masses.sum()
    return _l1(pushforward.act(masses) - masses)
