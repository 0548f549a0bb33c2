"""
Piecewise-injective interval endomorphisms with explicit inverse branches.

A BranchMap stores, per branch position p, the branch interval J_p, the image
interval of sigma on J_p, and vectorized callables for the forward branch
sigma_p, the inverse branch tau_p and |tau_p'|. Branch *labels* (``indices``)
are what users see: 0-based for the doubling map, 1-based for Gauss. Every
callable takes an array of branch *positions* and broadcasts against x.
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, NamedTuple, Optional, Tuple

import numpy as np

from config.settings import IDENTITY_TOL
from src.core.exceptions import InvalidArgumentError, InvalidWordError, TailEscapeError
from src.utils.sampling import quasi_random_points

SymbolWord = Tuple[int, ...]
BranchFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


class Interval(NamedTuple):
    lower: float
    upper: float

    @property
    def length(self) -> float:
        return self.upper - self.lower

    def contains(self, x: float) -> bool:
        return self.lower <= x <= self.upper


def _like_input(result: np.ndarray, x) -> np.ndarray:
    if np.ndim(x) == 0:
        return float(np.asarray(result).reshape(-1)[0])
    return result


@dataclass(frozen=True, eq=False)
class BranchMap:
    """Interval endomorphism sigma given by its branches."""

    label: str
    indices: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    image_lower: np.ndarray
    image_upper: np.ndarray
    inverse_fn: BranchFn
    forward_fn: BranchFn
    inverse_slope_fn: BranchFn
    closed_right: bool = False
    k_max: Optional[int] = None
    tail_mass_bound: float = 0.0
    tolerance: float = IDENTITY_TOL

    @property
    def branch_count(self) -> int:
        return int(self.indices.size)

    @property
    def is_countable(self) -> bool:
        return self.k_max is not None

    @property
    def is_full(self) -> bool:
        """Every branch maps onto all of [0, 1)."""
        return bool(np.all(self.image_lower == 0.0) and np.all(self.image_upper == 1.0))

    @cached_property
    def _order(self) -> np.ndarray:
        return np.argsort(self.lower, kind="stable")

    @cached_property
    def _positions(self) -> Dict[int, int]:
        return {int(k): p for p, k in enumerate(self.indices)}

    def position_of(self, k: int) -> int:
        try:
            return self._positions[int(k)]
        except KeyError:
            raise InvalidWordError(f"{self.label}: unknown branch label {k!r}") from None

    def positions_of(self, word: SymbolWord) -> np.ndarray:
        return np.array([self.position_of(k) for k in word], dtype=np.int64)

    def branch_interval(self, k: int) -> Interval:
        p = self.position_of(k)
        return Interval(float(self.lower[p]), float(self.upper[p]))

    def image_interval(self, k: int) -> Interval:
        p = self.position_of(k)
        return Interval(float(self.image_lower[p]), float(self.image_upper[p]))

    def branch_of(self, y) -> np.ndarray:
        """Branch position of each y, or -1 where y lies in no branch (the truncated tail)."""
        y = np.asarray(y, dtype=float)
        order = self._order
        lo = self.lower[order]
        hi = self.upper[order]
        last = self.branch_count - 1
        if self.closed_right:
            idx = np.searchsorted(hi, y, side="left")
            safe = np.clip(idx, 0, last)
            ok = (idx <= last) & (y > lo[safe]) & (y <= hi[safe])
        else:
            idx = np.searchsorted(lo, y, side="right") - 1
            safe = np.clip(idx, 0, last)
            ok = (idx >= 0) & (y >= lo[safe]) & (y < hi[safe])
        return np.where(ok, order[safe], -1)

    def labels_of(self, y) -> np.ndarray:
        pos = self.branch_of(y)
        return np.where(pos >= 0, self.indices[np.clip(pos, 0, None)], -1)

    def forward(self, pos: np.ndarray, y: np.ndarray) -> np.ndarray:
        """sigma_p(y), clipped into the image interval against endpoint rounding."""
        pos = np.asarray(pos)
        value = self.forward_fn(pos, y)
        top = np.nextafter(self.image_upper[pos], -np.inf)
        return np.clip(value, self.image_lower[pos], top)

    def sigma(self, y):
        """Apply sigma pointwise; raises TailEscapeError for points outside every branch."""
        arr = np.asarray(y, dtype=float)
        pos = self.branch_of(arr)
        if np.any(pos < 0):
            bad = arr.reshape(-1)[np.flatnonzero(pos.reshape(-1) < 0)[0]]
            raise TailEscapeError(step=None, point=float(bad))
        return _like_input(self.forward(pos, arr), y)

    def tau(self, k: int, x):
        """Inverse branch tau_k for the branch labelled k."""
        p = self.position_of(k)
        arr = np.asarray(x, dtype=float)
        return _like_input(self.inverse_fn(np.full(arr.shape, p), arr), x)

    def inverse_slope_at(self, y) -> np.ndarray:
        """1 / |sigma'(y)|, i.e. |tau_p'| evaluated at sigma(y)."""
        y = np.asarray(y, dtype=float)
        pos = np.clip(self.branch_of(y), 0, None)
        return self.inverse_slope_fn(pos, self.forward(pos, y))

    def preimages(self, x) -> Tuple[np.ndarray, np.ndarray]:
        """
        All inverse-branch images of each x.

        Args:
            x: Points of [0, 1), shape (m,)

        Returns:
            Tuple (points, valid) of shape (K, m); valid[p, j] is False when x_j
            is not in the image of branch p (points there are finite placeholders)
        """
        x = np.atleast_1d(np.asarray(x, dtype=float))
        pos = np.arange(self.branch_count)[:, None]
        valid = (x[None, :] >= self.image_lower[:, None]) & (x[None, :] < self.image_upper[:, None])
        safe_x = np.where(valid, x[None, :], self.image_lower[:, None])
        return self.inverse_fn(pos, safe_x), valid

    def validate(self, samples: int = 256) -> float:
        """
        Check the branch invariants and return the worst inverse-branch residual.

        Raises:
            InvalidArgumentError: If branches overlap, leave gaps, or tau_k is
                not a right inverse of sigma_k to the map's tolerance
        """
        order = self._order
        lo = self.lower[order]
        hi = self.upper[order]
        if np.any(hi <= lo):
            raise InvalidArgumentError(f"{self.label}: empty branch interval")
        gaps = np.abs(lo[1:] - hi[:-1])
        if gaps.size and gaps.max() > self.tolerance:
            raise InvalidArgumentError(f"{self.label}: branches overlap or leave a gap ({gaps.max():.3e})")
        if abs(hi[-1] - 1.0) > self.tolerance:
            raise InvalidArgumentError(f"{self.label}: branches do not reach 1")
        if not self.is_countable and abs(lo[0]) > self.tolerance:
            raise InvalidArgumentError(f"{self.label}: branches do not start at 0")

        u = quasi_random_points(samples)
        pos = np.arange(self.branch_count)[:, None]
        x = self.image_lower[:, None] + u[None, :] * (self.image_upper - self.image_lower)[:, None]
        y = self.inverse_fn(pos, x)
        residual = float(np.max(np.abs(self.forward_fn(pos, y) - x)))
        slack = self.tolerance
        inside = (y >= self.lower[:, None] - slack) & (y <= self.upper[:, None] + slack)
        if not np.all(inside):
            raise InvalidArgumentError(f"{self.label}: an inverse branch leaves its branch interval")
        if residual > self.tolerance:
            raise InvalidArgumentError(
                f"{self.label}: |sigma(tau(x)) - x| = {residual:.3e} exceeds {self.tolerance:.1e}"
            )
        return residual

    def __repr__(self) -> str:
        extra = f", k_max={self.k_max}" if self.is_countable else ""
        return f"BranchMap(label={self.label!r}, branches={self.branch_count}{extra})"
