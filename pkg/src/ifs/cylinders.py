"""
IFS measures as tables of cylinder masses: mass(k_1 ... k_m) = p_{k_1} ... p_{k_m}.
"""
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np

from config.logging_config import ifs_logger as logger
from config.settings import MAX_CYLINDERS
from src.core.checks import CheckResult
from src.core.exceptions import InvalidArgumentError, InvalidWordError, SizeLimitError
from src.dynamics.branch_map import BranchMap, SymbolWord
from src.measures.measures import HistogramMeasure
from src.utils.formatters import write_json
from src.utils.grid import cell_edges
from src.utils.quadrature import integrate_pieces
from src.utils.validators import require_positive_int
from .base_ifs import IFSMeasure
from .integration import sigma_invariance_residual
from .probability import ProbabilityVector


class CylinderTable(IFSMeasure):
    """
    Masses of all words up to a fixed depth.

    levels[j] holds the K^j masses of the words of length j, ordered by branch
    position with the first symbol most significant. Within a deepest-level
    cylinder the mass is spread uniformly, which fixes mass(), integrate() and
    histogram() between cylinder endpoints.
    """

    representation = "cylinder_table"

    def __init__(self, branch_map: BranchMap, pvec: ProbabilityVector, levels: List[np.ndarray],
                 lower: np.ndarray, upper: np.ndarray):
        super().__init__(branch_map, pvec)
        self.levels = levels
        self.lower = lower
        self.upper = upper
        order = np.argsort(lower, kind="stable")
        a, b, m = lower[order], upper[order], levels[-1][order]
        cumulative = np.concatenate(([0.0], np.cumsum(m)))
        self._knots = np.column_stack([a, b]).ravel()
        self._values = np.column_stack([cumulative[:-1], cumulative[1:]]).ravel()

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    @property
    def size(self) -> int:
        return int(sum(level.size for level in self.levels[1:]))

    def _index(self, word: SymbolWord) -> int:
        positions = self.branch_map.positions_of(word)
        if positions.size > self.depth:
            raise InvalidWordError(f"word {word} is deeper than the table (depth {self.depth})")
        index = 0
        for p in positions:
            index = index * self.pvec.size + int(p)
        return index

    def word_mass(self, word: SymbolWord) -> float:
        """Tabulated mass of a word (labels)."""
        return float(self.levels[len(word)][self._index(word)])

    def cdf(self, x) -> np.ndarray:
        return np.interp(np.asarray(x, dtype=float), self._knots, self._values,
                         left=0.0, right=float(self._values[-1]))

    def mass(self, a, b) -> np.ndarray:
        return self.cdf(b) - self.cdf(a)

    def integrate(self, fn, a: float = 0.0, b: float = 1.0) -> float:
        lo = np.maximum(self.lower, a)
        hi = np.minimum(self.upper, b)
        inside = np.flatnonzero(hi > lo)
        if inside.size == 0:
            return 0.0
        density = self.levels[-1][inside] / (self.upper[inside] - self.lower[inside])
        return float(np.dot(integrate_pieces(fn, lo[inside], hi[inside], order=8), density))

    def histogram(self, n: int) -> HistogramMeasure:
        return HistogramMeasure(np.clip(np.diff(self.cdf(cell_edges(n))), 0.0, None))

    def kolmogorov_residual(self) -> float:
        """max over nodes of |sum of children masses - parent mass|."""
        worst = 0.0
        K = self.pvec.size
        for parent, children in zip(self.levels[:-1], self.levels[1:]):
            worst = max(worst, float(np.max(np.abs(children.reshape(parent.size, K).sum(axis=1) - parent))))
        return worst

    def cdf_invariance_residual(self, n: int) -> float:
        """
        sup over grid edges e of |mu(sigma^{-1}[0, e)) - mu([0, e))|.

        Both sides agree at the endpoints of every cylinder one level up, so
        the residual is bounded by the largest such cylinder mass.
        """
        return sigma_invariance_residual(self, self.branch_map, n)

    def invariance_bound(self) -> float:
        return 2.0 * float(np.max(self.levels[-2])) + 1e-10 + 2.0 * self.pvec.tail_mass

    def invariance_check(self, n: int) -> CheckResult:
        residual = self.cdf_invariance_residual(n)
        bound = self.invariance_bound()
        return CheckResult.from_residual(
            "ifs.sigma_invariance", residual, bound, f"depth {self.depth}, n={n}, bound {bound:.3e}"
        )

    def to_tree(self, max_depth: Optional[int] = None) -> Dict[str, Any]:
        """Nested {word, mass, children} nodes down to max_depth (default: the table depth)."""
        depth = self.depth if max_depth is None else min(max_depth, self.depth)
        labels = [int(k) for k in self.branch_map.indices]

        def node(word: List[int], index: int) -> Dict[str, Any]:
            level = len(word)
            out = {"word": list(word), "mass": float(self.levels[level][index])}
            if level < depth:
                out["children"] = [
                    node(word + [labels[p]], index * len(labels) + p) for p in range(len(labels))
                ]
            return out

        return node([], 0)

    def write_tree(self, path: Union[str, Path], max_depth: Optional[int] = None) -> Path:
        payload = {
            "map": self.branch_map.label,
            "depth": self.depth,
            "p": self.pvec.to_dict(),
            "tree": self.to_tree(max_depth),
        }
        return write_json(path, payload)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "representation": self.representation,
            "map": self.branch_map.label,
            "depth": self.depth,
            "p": self.pvec.to_dict(),
        }


def ifs_measure_cylinders(branch_map: BranchMap, pvec: ProbabilityVector, depth: int) -> CylinderTable:
    """
    Cylinder table of the IFS measure of (branch_map, pvec) down to `depth`.

    Raises:
        SizeLimitError: If the table would hold more than 10^7 cylinders
        InvalidArgumentError: If p does not match the branches or the map is not full-branched
    """
    depth = require_positive_int(depth, "depth")
    K = branch_map.branch_count
    if pvec.size != K:
        raise InvalidArgumentError(f"{branch_map.label} has {K} branches but p has {pvec.size} entries")
    if not branch_map.is_full:
        raise InvalidArgumentError(f"{branch_map.label}: cylinder products need full branches")
    count = sum(K ** j for j in range(1, depth + 1))
    if count > MAX_CYLINDERS:
        raise SizeLimitError(f"{count} cylinders at depth {depth} exceed the limit of {MAX_CYLINDERS}")

    levels = [np.ones(1)]
    for _ in range(depth):
        levels.append(np.multiply.outer(levels[-1], pvec.p).ravel())

    lower = branch_map.lower.copy()
    upper = branch_map.upper.copy()
    for _ in range(depth - 1):
        new_lower, new_upper = [], []
        for p in range(K):
            pos = np.full(lower.shape, p)
            a = branch_map.inverse_fn(pos, lower)
            b = branch_map.inverse_fn(pos, upper)
            new_lower.append(np.minimum(a, b))
            new_upper.append(np.maximum(a, b))
        lower = np.concatenate(new_lower)
        upper = np.concatenate(new_upper)

    logger.info(f"cylinder table {branch_map.label} depth {depth}: {count} cylinders")
    return CylinderTable(branch_map, pvec, levels, lower, upper)
