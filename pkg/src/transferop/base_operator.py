"""
Base transfer operator interface that all operator implementations inherit from.
"""
from abc import ABC, abstractmethod
from typing import Callable, Tuple

import numpy as np

from config.settings import ARITHMETIC_TOL, DEFAULT_SAMPLES
from src.utils.sampling import quasi_random_points

GridFn = Callable[[np.ndarray], np.ndarray]

_CHUNK_ELEMENTS = 1 << 21


def _constant_one(y: np.ndarray) -> np.ndarray:
    return np.ones_like(y)


class BaseTransferOperator(ABC):
    """
    Positive operator R f(x) = sum over y in sigma^{-1}(x) of W(y) f(y).

    Subclasses describe R through its kernel: for each x the preimage points
    and their weights. Everything else (application, normalization checks,
    Ulam assembly for weighted subclasses) is derived from that.
    """

    label: str = "operator"
    tail_mass_bound: float = 0.0

    @abstractmethod
    def kernel(self, x) -> Tuple[np.ndarray, np.ndarray]:
        """
        Preimage points and weights of each x.

        Args:
            x: Points of [0, 1), shape (m,)

        Returns:
            Tuple (points, weights) of shape (K, m); weights are zero for
            preimages that do not exist
        """
        pass

    @abstractmethod
    def sigma(self, y):
        """The endomorphism the pull-out property refers to."""
        pass

    def apply(self, f: GridFn, x):
        """R(f)(x); f must accept numpy arrays."""
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty(arr.shape)
        flat = arr.reshape(-1)
        result = out.reshape(-1)
        probe, _ = self.kernel(flat[:1])
        step = max(1, _CHUNK_ELEMENTS // max(1, probe.shape[0]))
        for start in range(0, flat.size, step):
            points, weights = self.kernel(flat[start:start + step])
            values = np.where(weights != 0.0, np.asarray(f(points), dtype=float), 0.0)
            result[start:start + step] = (weights * values).sum(axis=0)
        if np.ndim(x) == 0:
            return float(result[0])
        return out

    def __call__(self, f: GridFn) -> GridFn:
        """R as an operator on functions: returns x -> R(f)(x)."""
        return lambda x: self.apply(f, x)

    def normalization_residual(self, samples: int = DEFAULT_SAMPLES, seed: int = 0) -> float:
        """max |R(1)(x) - 1| over quasi-random x."""
        x = quasi_random_points(samples, seed)
        return float(np.max(np.abs(self.apply(_constant_one, x) - 1.0)))

    def is_normalized(self, tol: float = ARITHMETIC_TOL) -> bool:
        return self.normalization_residual() <= tol + self.tail_mass_bound

    def __repr__(self) -> str:
        return f"{type(self).__name__}(label={self.label!r})"
