"""
Truncated solenoid points (x_0, x_1, ..., x_m) with sigma(x_{i+1}) = x_i.
"""
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from src.core.exceptions import HistoryExhaustedError, InvalidArgumentError
from .branch_map import BranchMap, SymbolWord


@dataclass(frozen=True)
class SolenoidPoint:
    """
    A finite piece of a backward orbit.

    `coordinates[0]` is the base x_0 and coordinates[i+1] = tau_{history[i]}(coordinates[i]).
    Coordinates are stored rather than recomputed so dropping the newest
    coordinate undoes a lift exactly.
    """

    coordinates: Tuple[float, ...]
    history: SymbolWord

    def __post_init__(self):
        if len(self.coordinates) != len(self.history) + 1:
            raise InvalidArgumentError("a solenoid point needs one more coordinate than history symbols")

    @property
    def base(self) -> float:
        return self.coordinates[0]

    @classmethod
    def from_history(cls, branch_map: BranchMap, base: float, history: SymbolWord = ()) -> "SolenoidPoint":
        coords = [float(base)]
        for k in history:
            coords.append(float(branch_map.tau(k, coords[-1])))
        return cls(tuple(coords), tuple(int(k) for k in history))


def solenoid_lift(branch_map: BranchMap, point: SolenoidPoint) -> SolenoidPoint:
    """sigma~(x_0, x_1, ...) = (sigma(x_0), x_0, x_1, ...), recording x_0's branch."""
    base = point.base
    pos = int(branch_map.branch_of(base))
    if pos < 0:
        branch_map.sigma(base)  # raises TailEscapeError
    new_base = float(branch_map.forward(np.array(pos), np.array(base)))
    label = int(branch_map.indices[pos])
    return SolenoidPoint((new_base,) + point.coordinates, (label,) + point.history)


def solenoid_drop(point: SolenoidPoint) -> SolenoidPoint:
    """Truncated inverse of the lift: forget the newest coordinate."""
    if not point.history:
        raise HistoryExhaustedError("cannot drop from a solenoid point with empty history")
    return SolenoidPoint(point.coordinates[1:], point.history[1:])


def solenoid_orbit(branch_map: BranchMap, point: SolenoidPoint, steps: int) -> List[SolenoidPoint]:
    orbit = [point]
    for _ in range(steps):
        orbit.append(solenoid_lift(branch_map, orbit[-1]))
    return orbit


def solenoid_residual(branch_map: BranchMap, point: SolenoidPoint) -> float:
    """max_i |sigma(x_{i+1}) - x_i| over the recorded coordinates."""
    if not point.history:
        return 0.0
    coords = np.asarray(point.coordinates)
    return float(np.max(np.abs(np.asarray(branch_map.sigma(coords[1:])) - coords[:-1])))
