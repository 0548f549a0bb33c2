"""
Ulam discretization of the dual action mu -> mu R and of the pushforward
mu -> mu o sigma^{-1} on the uniform n-grid.

Column-action convention: a histogram is a column vector of cell masses and
M @ masses is its image. The function-side action is the transpose.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd
from scipy import sparse

from config.logging_config import measure_logger as logger
from config.settings import ARITHMETIC_TOL, DEFAULT_QUADRATURE_ORDER
from src.core.exceptions import InvalidArgumentError
from src.dynamics.branch_map import BranchMap
from src.dynamics.pieces import grid_pieces
from src.transferop.base_operator import BaseTransferOperator
from src.utils.quadrature import interval_nodes
from src.utils.validators import require_positive_int


@dataclass(frozen=True)
class UlamMatrix:
    """
    Nonnegative n x n matrix P acting on cell-mass column vectors.

    P[i, j] is the share of the mass of cell j that lands in cell i.
    """

    n: int
    matrix: sparse.csr_matrix
    map_label: str
    weight_label: str
    tail_mass_bound: float = 0.0
    kind: str = "ulam"

    @property
    def column_sums(self) -> np.ndarray:
        return np.asarray(self.matrix.sum(axis=0)).ravel()

    def act(self, masses: np.ndarray) -> np.ndarray:
        """Image of a histogram (cell masses) under the measure-side action."""
        return self.matrix @ np.asarray(masses, dtype=float)

    def function_action(self, values: np.ndarray) -> np.ndarray:
        """Cell averages of R(f) for f constant on cells."""
        return self.matrix.T @ np.asarray(values, dtype=float)

    def is_stochastic(self, tol: float = ARITHMETIC_TOL) -> bool:
        sums = self.column_sums
        return bool(np.all(sums <= 1.0 + tol) and np.all(sums >= 1.0 - tol - 2.0 * self.tail_mass_bound))

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def to_frame(self) -> pd.DataFrame:
        """Nonzero entries as (row, col, value) rows."""
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.row, coo.col))
        return pd.DataFrame({
            "row": coo.row[order],
            "col": coo.col[order],
            "value": coo.data[order],
        })


def _branch_map_of(R: BaseTransferOperator) -> BranchMap:
    op = R
    while op is not None:
        branch_map = getattr(op, "branch_map", None)
        if branch_map is not None:
            return branch_map
        op = getattr(op, "base", None)
    raise InvalidArgumentError(f"{R.label}: Ulam discretization needs an operator over a BranchMap")


class _SparseAccumulator:
    """Sums (row, col, value) triples into a csr matrix in bounded batches."""

    batch_size = 1 << 20

    def __init__(self, n: int):
        self.n = n
        self.total = sparse.csr_matrix((n, n))
        self._rows, self._cols, self._data = [], [], []
        self._pending = 0

    def add(self, rows: np.ndarray, cols: np.ndarray, data: np.ndarray) -> None:
        self._rows.append(rows)
        self._cols.append(cols)
        self._data.append(data)
        self._pending += rows.size
        if self._pending >= self.batch_size:
            self._flush()

    def _flush(self) -> None:
        if not self._rows:
            return
        batch = sparse.coo_matrix(
            (np.concatenate(self._data), (np.concatenate(self._rows), np.concatenate(self._cols))),
            shape=(self.n, self.n),
        ).tocsr()
        self.total = self.total + batch
        self._rows, self._cols, self._data = [], [], []
        self._pending = 0

    def result(self) -> sparse.csr_matrix:
        self._flush()
        matrix = self.total.tocsr()
        matrix.sum_duplicates()
        matrix.eliminate_zeros()
        return matrix


def ulam_matrix(R: BaseTransferOperator, n: int, order: int = DEFAULT_QUADRATURE_ORDER) -> UlamMatrix:
    """
    Assemble P[i, j] = n * sum_k int_{cell j} W(tau_k x) chi_i(tau_k x) dx.

    Each source cell is cut into pieces on which one inverse branch stays
    inside one target cell, and the weight is integrated over each piece with
    Gauss-Legendre quadrature.

    Args:
        R: Operator defined over a BranchMap; kernel rows must follow branch positions
        n: Grid size (>= 2)
        order: Quadrature nodes per piece

    Returns:
        UlamMatrix in the column-action convention
    """
    n = require_positive_int(n, "n", minimum=2)
    branch_map = _branch_map_of(R)
    weight = getattr(R, "weight", None)
    accumulator = _SparseAccumulator(n)
    for pieces in grid_pieces(branch_map, n):
        if pieces.size == 0:
            continue
        x, w = interval_nodes(pieces.x_lower, pieces.x_upper, order)
        if weight is not None:
            y = branch_map.inverse_fn(np.full(x.shape, pieces.position), x)
            values = np.asarray(weight(y), dtype=float) + np.zeros(x.shape)
        else:
            _, kernel_weights = R.kernel(x.reshape(-1))
            values = kernel_weights[pieces.position].reshape(x.shape)
        accumulator.add(pieces.y_cell, pieces.x_cell, n * (values * w).sum(axis=1))
    matrix = accumulator.result()
    logger.debug(f"Ulam matrix {R.label} n={n}: {matrix.nnz} nonzeros")
    return UlamMatrix(
        n=n,
        matrix=matrix,
        map_label=branch_map.label,
        weight_label=getattr(R, "weight_label", R.label),
        tail_mass_bound=R.tail_mass_bound,
    )


def pushforward_matrix(branch_map: BranchMap, n: int) -> UlamMatrix:
    """
    Exact matrix of mu -> mu o sigma^{-1} on histograms:
    T[i, j] = n * |{y in cell j : sigma(y) in cell i}|.

    It equals the transpose of the Ulam matrix of the Perron-Frobenius operator.
    """
    n = require_positive_int(n, "n", minimum=2)
    accumulator = _SparseAccumulator(n)
    for pieces in grid_pieces(branch_map, n):
        if pieces.size == 0:
            continue
        accumulator.add(pieces.x_cell, pieces.y_cell, n * pieces.y_length)
    matrix = accumulator.result()
    logger.debug(f"pushforward matrix {branch_map.label} n={n}: {matrix.nnz} nonzeros")
    return UlamMatrix(
        n=n,
        matrix=matrix,
        map_label=branch_map.label,
        weight_label="pushforward",
        tail_mass_bound=branch_map.tail_mass_bound,
        kind="pushforward",
    )


def column_sum_defect(M: UlamMatrix) -> float:
    """max |column sum - 1|."""
    return float(np.max(np.abs(M.column_sums - 1.0)))


def matrix_for(R: Optional[BaseTransferOperator], n: int, branch_map: Optional[BranchMap] = None) -> UlamMatrix:
    """Ulam matrix of R, or the pushforward matrix of branch_map when R is None."""
    if R is not None:
        return ulam_matrix(R, n)
    if branch_map is None:
        raise InvalidArgumentError("need an operator or a map")
    return pushforward_matrix(branch_map, n)
