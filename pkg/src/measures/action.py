"""
The dual action mu -> mu R, defined by (mu R)(f) = int R(f) dmu, and the
Radon-Nikodym derivative W = d(mu R)/dmu at grid resolution.
"""
from typing import Optional

import numpy as np

from config.logging_config import measure_logger as logger
from src.core.exceptions import AbsoluteContinuityError, InvalidArgumentError, MustDiscretizeError
from src.transferop.base_operator import BaseTransferOperator
from src.utils.grid import FunctionOnGrid
from .base_measure import BaseMeasure
from .measures import AtomicMeasure, ClosedFormMeasure, HistogramMeasure
from .ulam import UlamMatrix, ulam_matrix


def act_on_measure(R: BaseTransferOperator, mu: BaseMeasure, matrix: Optional[UlamMatrix] = None) -> BaseMeasure:
    """
    Image of mu under the dual action of R.

    Atomic measures are pushed exactly: delta_x R = sum_k W(tau_k x) delta_{tau_k x}.
    Histograms go through the Ulam matrix (assembled at mu's resolution
    unless one is passed in).

    Raises:
        MustDiscretizeError: For closed-form measures; discretize them first
    """
    if isinstance(mu, AtomicMeasure):
        if mu.size == 0:
            return AtomicMeasure([], [])
        points, weights = R.kernel(mu.locations)
        masses = weights * mu.masses[None, :]
        keep = masses > 0
        return AtomicMeasure(points[keep], masses[keep], tol=mu.tol)
    if isinstance(mu, HistogramMeasure):
        if matrix is None:
            matrix = ulam_matrix(R, mu.n)
        elif matrix.n != mu.n:
            raise InvalidArgumentError(f"matrix is {matrix.n}-cell but the histogram has {mu.n} cells")
        return HistogramMeasure(np.clip(matrix.act(mu.masses), 0.0, None))
    if isinstance(mu, ClosedFormMeasure):
        raise MustDiscretizeError(
            f"no pushforward rule for closed-form measure {mu.label!r}; discretize it to a histogram first"
        )
    raise InvalidArgumentError(f"unsupported measure kind {type(mu).__name__}")


def absolute_continuity_violations(first: BaseMeasure, second: BaseMeasure) -> np.ndarray:
    """
    Where first fails to be absolutely continuous with respect to second.

    Histograms: cells with positive first-mass and zero second-mass.
    Atomic measures: locations of atoms of first that are not atoms of second.
    """
    if isinstance(first, HistogramMeasure) and isinstance(second, HistogramMeasure):
        if first.n != second.n:
            raise InvalidArgumentError("histograms live on different grids")
        return np.flatnonzero((first.masses > 0) & (second.masses == 0))
    if isinstance(first, AtomicMeasure) and isinstance(second, AtomicMeasure):
        missing = [x for x in first.locations if second.index_of(x) < 0]
        return np.asarray(missing, dtype=float)
    raise InvalidArgumentError("absolute continuity is tested between measures of the same kind")


def is_absolutely_continuous(first: BaseMeasure, second: BaseMeasure) -> bool:
    return absolute_continuity_violations(first, second).size == 0


def radon_nikodym(R: BaseTransferOperator, mu: HistogramMeasure,
                  matrix: Optional[UlamMatrix] = None) -> FunctionOnGrid:
    """
    Cellwise ratio (mu R)[i] / mu[i].

    Raises:
        AbsoluteContinuityError: If mu R puts mass in cells where mu has none
    """
    if not isinstance(mu, HistogramMeasure):
        raise InvalidArgumentError("radon_nikodym needs a histogram measure")
    image = act_on_measure(R, mu, matrix)
    offending = absolute_continuity_violations(image, mu)
    if offending.size:
        raise AbsoluteContinuityError(offending, f"{R.label}: mu R is not absolutely continuous with respect to mu")
    ratio = np.divide(image.masses, mu.masses, out=np.zeros(mu.n), where=mu.masses > 0)
    logger.debug(f"{R.label}: derivative range [{ratio.min():.6g}, {ratio.max():.6g}] on {mu.n} cells")
    return FunctionOnGrid(ratio)


def derivative_pairing_residual(R: BaseTransferOperator, mu: HistogramMeasure, derivative: FunctionOnGrid,
                                f, matrix: Optional[UlamMatrix] = None) -> float:
    """|int R(f) dmu - int f W dmu| for a test function f at grid resolution."""
    matrix = matrix if matrix is not None else ulam_matrix(R, mu.n)
    values = np.asarray(f(mu.midpoints), dtype=float)
    lhs = float(np.dot(matrix.function_action(values), mu.masses))
    rhs = float(np.dot(values * derivative.values, mu.masses))
    return abs(lhs - rhs)
