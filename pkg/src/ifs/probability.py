"""
Probability vectors over the branches of a map.
"""
from dataclasses import dataclass
from typing import Any, Dict, Sequence

import numpy as np

from src.core.exceptions import InvalidArgumentError
from src.utils.validators import require_nonnegative_array, require_positive_int


@dataclass(frozen=True)
class ProbabilityVector:
    """
    Branch probabilities p, indexed by branch position.

    A truncated infinite vector records the mass it leaves out in tail_mass,
    so that sum(p) + tail_mass = 1.
    """

    p: np.ndarray
    tail_mass: float = 0.0

    def __post_init__(self):
        p = require_nonnegative_array(self.p, "probabilities")
        if p.ndim != 1 or p.size < 1:
            raise InvalidArgumentError("a probability vector needs at least one entry")
        if self.tail_mass < 0:
            raise InvalidArgumentError(f"tail mass must be nonnegative, got {self.tail_mass!r}")
        defect = abs(p.sum() + self.tail_mass - 1.0)
        if defect > 1e-12 + 1e-15 * p.size:
            raise InvalidArgumentError(
                f"probabilities sum to {p.sum():.15g} with tail {self.tail_mass:.3e}; expected 1"
            )
        object.__setattr__(self, "p", p)

    @classmethod
    def uniform(cls, size: int) -> "ProbabilityVector":
        size = require_positive_int(size, "size")
        return cls(np.full(size, 1.0 / size))

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "ProbabilityVector":
        return cls(np.asarray(values, dtype=float))

    @property
    def size(self) -> int:
        return int(self.p.size)

    @property
    def is_positive(self) -> bool:
        return bool(np.all(self.p > 0))

    @property
    def is_truncated(self) -> bool:
        return self.tail_mass > 0

    def word_mass(self, positions: Sequence[int]) -> float:
        """p_{k_1} ... p_{k_m} for a word given by branch positions."""
        return float(np.prod(self.p[np.asarray(positions, dtype=np.int64)]))

    def sampling_weights(self) -> np.ndarray:
        """p renormalized to sum one, for drawing branches."""
        return self.p / self.p.sum()

    def to_dict(self) -> Dict[str, Any]:
        return {"p": self.p.tolist(), "tail_mass": self.tail_mass}


def gauss_branch_masses(k_max: int) -> ProbabilityVector:
    """
    mu_0(J_k) = log2(1 + 1/(k(k+2))) for k = 1..k_max.

    The sum telescopes, so the tail after k_max is exactly log2(1 + 1/(k_max+1)).
    """
    k_max = require_positive_int(k_max, "k_max")
    k = np.arange(1, k_max + 1, dtype=float)
    p = np.log1p(1.0 / (k * (k + 2.0))) / np.log(2.0)
    tail = float(np.log1p(1.0 / (k_max + 1.0)) / np.log(2.0))
    return ProbabilityVector(p, tail_mass=tail)
