"""
Base measure interface that all measure kinds inherit from.
"""
from abc import ABC, abstractmethod
from typing import Any, Callable, Dict

import numpy as np


class BaseMeasure(ABC):
    """Finite positive measure on [0, 1)."""

    kind: str = "measure"

    @property
    @abstractmethod
    def total_mass(self) -> float:
        pass

    @abstractmethod
    def cdf(self, x) -> np.ndarray:
        """mu([0, x)) for continuous kinds, mu([0, x]) for atomic measures."""
        pass

    @abstractmethod
    def mass(self, a, b) -> np.ndarray:
        """mu([a, b)), vectorized over interval endpoints."""
        pass

    @abstractmethod
    def integrate(self, fn: Callable[[np.ndarray], np.ndarray], a: float = 0.0, b: float = 1.0) -> float:
        """Integral of fn over [a, b) against the measure."""
        pass

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        pass

    def mean(self) -> float:
        """First moment int x dmu."""
        return self.integrate(lambda x: np.asarray(x, dtype=float))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(total_mass={self.total_mass:.6g})"
