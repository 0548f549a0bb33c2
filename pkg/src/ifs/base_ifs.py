"""
Base interface for IFS measures mu_p = sum_k p_k mu o tau_k^{-1}.
"""
from abc import ABC, abstractmethod
from typing import Any, Callable, Dict

import numpy as np

from src.dynamics.branch_map import BranchMap, SymbolWord
from src.dynamics.coding import decode
from src.measures.measures import HistogramMeasure
from .probability import ProbabilityVector


class IFSMeasure(ABC):
    """An IFS measure together with one concrete representation of it."""

    representation: str = "ifs"

    def __init__(self, branch_map: BranchMap, pvec: ProbabilityVector):
        self.branch_map = branch_map
        self.pvec = pvec

    @abstractmethod
    def mass(self, a, b) -> np.ndarray:
        """mu([a, b))."""
        pass

    @abstractmethod
    def integrate(self, fn: Callable[[np.ndarray], np.ndarray], a: float = 0.0, b: float = 1.0) -> float:
        pass

    @abstractmethod
    def histogram(self, n: int) -> HistogramMeasure:
        pass

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        pass

    @property
    def total_mass(self) -> float:
        return float(self.mass(0.0, 1.0 + 1e-15))

    def cylinder_mass(self, word: SymbolWord) -> float:
        """Mass of the cylinder interval decode(word)."""
        interval = decode(self.branch_map, word)
        return float(self.mass(interval.lower, interval.upper))

    def mean(self) -> float:
        return self.integrate(lambda x: np.asarray(x, dtype=float))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(map={self.branch_map.label!r}, branches={self.pvec.size})"
