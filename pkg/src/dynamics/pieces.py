"""
Grid geometry of a branch map: the pieces on which a single inverse branch
sends one grid cell into one grid cell.

For branch p, the image interval is cut at the grid edges and at
sigma_p(grid edges inside J_p). On each resulting x-piece [a, b] the point x
stays in one cell and tau_p(x) stays in one cell, so Ulam and pushforward
matrices can be assembled from exact overlaps.
"""
from dataclasses import dataclass
from typing import Iterator

import numpy as np
from src.utils.grid import cell_edges, cell_of
from src.utils.progress import progress
from .branch_map import BranchMap


@dataclass(frozen=True)
class BranchPieces:
    position: int
    x_lower: np.ndarray
    x_upper: np.ndarray
    x_cell: np.ndarray
    y_cell: np.ndarray
    y_length: np.ndarray

    @property
    def size(self) -> int:
        return int(self.x_lower.size)


def branch_pieces(branch_map: BranchMap, pos: int, n: int) -> BranchPieces:
    edges = cell_edges(n)
    il, iu = branch_map.image_lower[pos], branch_map.image_upper[pos]
    lo, hi = branch_map.lower[pos], branch_map.upper[pos]
    x_cuts = edges[(edges > il) & (edges < iu)]
    y_cuts = edges[(edges > lo) & (edges < hi)]
    mapped = branch_map.forward_fn(np.full(y_cuts.shape, pos), y_cuts)
    cuts = np.unique(np.concatenate(([il, iu], x_cuts, mapped)))
    cuts = cuts[(cuts >= il) & (cuts <= iu)]
    a, b = cuts[:-1], cuts[1:]
    keep = b > a
    a, b = a[keep], b[keep]
    mid = 0.5 * (a + b)
    positions = np.full(a.shape, pos)
    ya = branch_map.inverse_fn(positions, a)
    yb = branch_map.inverse_fn(positions, b)
    return BranchPieces(
        position=int(pos),
        x_lower=a,
        x_upper=b,
        x_cell=cell_of(mid, n),
        y_cell=cell_of(branch_map.inverse_fn(positions, mid), n),
        y_length=np.abs(yb - ya),
    )


def grid_pieces(branch_map: BranchMap, n: int) -> Iterator[BranchPieces]:
    """Pieces of every branch, in branch-position order."""
    positions = range(branch_map.branch_count)
    for pos in progress(positions, f"{branch_map.label} pieces"):
        yield branch_pieces(branch_map, pos, n)
