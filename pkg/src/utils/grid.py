"""
Uniform grids on [0, 1) and piecewise-constant functions living on them.
"""
from dataclasses import dataclass
from typing import Callable

import numpy as np

from src.core.exceptions import InvalidArgumentError


def cell_edges(n: int) -> np.ndarray:
    """Edges 0 = e_0 < ... < e_n = 1 of the uniform n-cell grid."""
    if n < 1:
        raise InvalidArgumentError(f"grid size must be positive, got {n}")
    return np.linspace(0.0, 1.0, n + 1)


def cell_midpoints(n: int) -> np.ndarray:
    return (np.arange(n) + 0.5) / n


def cell_of(x: np.ndarray, n: int) -> np.ndarray:
    """Index of the half-open cell [i/n, (i+1)/n) containing each x (clipped to the grid)."""
    idx = np.floor(np.asarray(x, dtype=float) * n).astype(np.int64)
    return np.clip(idx, 0, n - 1)


@dataclass(frozen=True)
class FunctionOnGrid:
    """Values of a function at the n cell midpoints of [0, 1)."""

    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 1:
            raise InvalidArgumentError("grid function needs a non-empty 1-d value array")
        if not np.all(np.isfinite(values)):
            raise InvalidArgumentError("grid function values must be finite")
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def midpoints(self) -> np.ndarray:
        return cell_midpoints(self.n)

    @classmethod
    def from_function(cls, f: Callable[[np.ndarray], np.ndarray], n: int) -> "FunctionOnGrid":
        return cls(np.asarray(f(cell_midpoints(n)), dtype=float))

    def __call__(self, x) -> np.ndarray:
        # piecewise-constant extension
        return self.values[cell_of(x, self.n)]
