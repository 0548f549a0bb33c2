"""
Restriction of transfer operators to sigma-invariant cell sets and the finite
ergodic decomposition they induce at grid resolution.
"""
from typing import List, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from config.logging_config import operator_logger as logger
from config.settings import DEFAULT_SAMPLES
from src.core.exceptions import InvalidArgumentError, InvariantSetViolationError
from src.dynamics.branch_map import BranchMap
from src.dynamics.pieces import grid_pieces
from src.utils.grid import cell_of
from src.utils.sampling import quasi_random_points
from .base_operator import BaseTransferOperator, GridFn
from .operators import RestrictedTransferOperator


def transition_graph(branch_map: BranchMap, n: int) -> sparse.csr_matrix:
    """Boolean n x n matrix with an entry (j, i) when sigma maps part of cell j into cell i."""
    rows, cols = [], []
    for pieces in grid_pieces(branch_map, n):
        rows.append(pieces.y_cell)
        cols.append(pieces.x_cell)
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    data = np.ones(rows.size)
    graph = sparse.coo_matrix((data, (rows, cols)), shape=(n, n)).tocsr()
    graph.sum_duplicates()
    return graph


def invariant_cell_sets(branch_map: BranchMap, n: int) -> List[np.ndarray]:
    """
    Minimal sigma-invariant cell sets (A = sigma^{-1} A at grid resolution).

    These are the weakly connected components of the transition graph,
    ordered by their smallest cell.
    """
    count, labels = connected_components(transition_graph(branch_map, n), directed=True, connection="weak")
    components = [np.flatnonzero(labels == c) for c in range(count)]
    components.sort(key=lambda cells: int(cells[0]))
    logger.debug(f"{branch_map.label}: {count} invariant cell set(s) at n={n}")
    return components


def invariance_violations(branch_map: BranchMap, n: int, cells: Sequence[int]) -> np.ndarray:
    """Cells on either side of a transition that crosses the boundary of the set."""
    member = np.zeros(n, dtype=bool)
    member[np.asarray(cells, dtype=np.int64)] = True
    graph = transition_graph(branch_map, n).tocoo()
    crossing = member[graph.row] != member[graph.col]
    return np.unique(np.concatenate([graph.row[crossing], graph.col[crossing]]))


def cell_indicator(cells: Sequence[int], n: int) -> GridFn:
    member = np.zeros(n, dtype=float)
    member[np.asarray(cells, dtype=np.int64)] = 1.0
    return lambda y: member[cell_of(y, n)]


def restrict(R: BaseTransferOperator, cells: Sequence[int], n: int) -> RestrictedTransferOperator:
    """
    R_A(f) = R(chi_A f) for a sigma-invariant union A of grid cells.

    Raises:
        InvariantSetViolationError: If chi_A o sigma != chi_A at cell resolution
    """
    branch_map = getattr(R, "branch_map", None)
    if branch_map is None:
        raise InvalidArgumentError("restriction needs an operator defined by a BranchMap")
    offending = invariance_violations(branch_map, n, cells)
    if offending.size:
        raise InvariantSetViolationError(offending)
    cells = np.asarray(cells, dtype=np.int64)
    label = f"cells[{cells.min()}..{cells.max()}]"
    return RestrictedTransferOperator(R, cell_indicator(cells, n), label, cells=cells, n=n)


def ergodic_decomposition(R: BaseTransferOperator, n: int) -> List[RestrictedTransferOperator]:
    """One restricted operator per minimal invariant cell set."""
    components = invariant_cell_sets(R.branch_map, n)
    if len(components) == 1:
        logger.info(f"{R.label}: no nontrivial invariant cell set at n={n}")
    return [restrict(R, cells, n) for cells in components]


def decomposition_residual(R: BaseTransferOperator, parts: List[RestrictedTransferOperator], f: GridFn,
                           samples: int = DEFAULT_SAMPLES) -> float:
    """max |sum_i R_{A_i}(f chi_{A_i}) - R(f)| on quasi-random points."""
    x = quasi_random_points(samples, seed=17)
    total = np.zeros(x.shape)
    for part in parts:
        total += part.apply(lambda y, part=part: np.asarray(f(y)) * part.indicator(y), x)
    return float(np.max(np.abs(total - R.apply(f, x))))
