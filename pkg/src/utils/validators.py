"""
Argument validation shared across packages.
"""
from typing import Callable

import numpy as np

from src.core.exceptions import InvalidArgumentError


def require_positive_int(value: int, name: str, minimum: int = 1) -> int:
    if int(value) != value or value < minimum:
        raise InvalidArgumentError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def require_positive(value: float, name: str) -> float:
    if not np.isfinite(value) or value <= 0:
        raise InvalidArgumentError(f"{name} must be a positive number, got {value!r}")
    return float(value)


def require_nonnegative_array(values: np.ndarray, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{name} must be finite")
    if np.any(arr < 0):
        raise InvalidArgumentError(f"{name} must be nonnegative (min {arr.min():.3e})")
    return arr


def require_positive_function(k: Callable[[np.ndarray], np.ndarray], points: np.ndarray, name: str) -> None:
    """Raise with the first sample location where k is not strictly positive."""
    values = np.asarray(k(points), dtype=float)
    bad = np.flatnonzero(~(values > 0))
    if bad.size:
        i = bad[0]
        raise InvalidArgumentError(
            f"{name} must be > 0 on [0, 1); {name}({points[i]:.17g}) = {values[i]:.6g}"
        )
