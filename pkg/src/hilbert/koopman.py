"""
Finite model of the Koopman isometry S f = f o sigma on L^2(mu).

Level j of the model is the space V_j of functions constant on the depth-j
cylinders of the coding, weighted by their mu-masses. Level 0 is the
partition of [0, 1) into branch images. S maps V_{j-1} into V_j exactly:
(S f)[k_1 ... k_j] = f[k_2 ... k_j], and at level 1 (S f)[k] = f[image of k].
When mu is sigma-invariant every S_j is an isometry.
"""
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np
from scipy import sparse

from config.logging_config import hilbert_logger as logger
from config.settings import ARITHMETIC_TOL, DEFAULT_SEED, HARMONIC_TOL
from src.core.exceptions import InvalidArgumentError, NotInvariantError
from src.dynamics.branch_map import BranchMap, SymbolWord
from src.dynamics.coding import admissible_words, decode
from src.utils.quadrature import integrate_pieces
from src.utils.sampling import make_rng
from src.utils.validators import require_positive_int

Vector = np.ndarray
FunctionLike = Union[Callable[[np.ndarray], np.ndarray], np.ndarray]


def _safe_inverse(values: np.ndarray) -> np.ndarray:
    return np.divide(1.0, values, out=np.zeros_like(values), where=values > 0)


@dataclass
class KoopmanSystem:
    """
    Cylinder levels 0..depth with their masses and the level maps S_j.

    Attributes:
        words: words[j] lists the depth-j cylinders (labels); words[0] lists
            the image classes as 1-tuples of their index
        lower, upper: Cylinder endpoints per level
        masses: mu-masses per level
        S: S[j] is the sparse N_j x N_{j-1} matrix of V_{j-1} -> V_j (S[0] is None)
        invariance_residual: max_j |S_j^T mu_j - mu_{j-1}|
    """

    branch_map: BranchMap
    depth: int
    words: List[List[SymbolWord]]
    lower: List[np.ndarray]
    upper: List[np.ndarray]
    masses: List[np.ndarray]
    S: List[Optional[sparse.csr_matrix]]
    invariance_residual: float

    def dim(self, level: int) -> int:
        return int(self.masses[level].size)

    def inner(self, f: Vector, g: Vector, level: Optional[int] = None) -> float:
        level = self.depth if level is None else level
        return float(np.sum(self.masses[level] * f * g))

    def norm(self, f: Vector, level: Optional[int] = None) -> float:
        return float(np.sqrt(max(self.inner(f, f, level), 0.0)))

    def mean(self, f: Vector, level: Optional[int] = None) -> float:
        level = self.depth if level is None else level
        return self.inner(f, np.ones_like(f), level) / float(self.masses[level].sum())

    def apply_S(self, f: Vector, level: int) -> Vector:
        """S: V_{level-1} -> V_level."""
        return self.S[level] @ f

    def apply_S_star(self, g: Vector, level: int) -> Vector:
        """S*: V_level -> V_{level-1}, the adjoint in the mu-weighted inner products."""
        return _safe_inverse(self.masses[level - 1]) * (self.S[level].T @ (self.masses[level] * g))

    def shift_power(self, f: Vector, n: int) -> Vector:
        """S^n: V_{depth-n} -> V_depth."""
        for level in range(self.depth - n + 1, self.depth + 1):
            f = self.apply_S(f, level)
        return f

    def shift_star_power(self, g: Vector, n: int) -> Vector:
        """S*^n: V_depth -> V_{depth-n}."""
        for level in range(self.depth, self.depth - n, -1):
            g = self.apply_S_star(g, level)
        return g

    def project_onto_past(self, f: Vector, n: int) -> Vector:
        """E_n f = S^n S*^n f on V_depth."""
        self._check_power(n)
        return self.shift_power(self.shift_star_power(f, n), n)

    def _check_power(self, n: int) -> None:
        if not 0 <= n <= self.depth:
            raise InvalidArgumentError(f"power {n} outside 0..{self.depth} for a depth-{self.depth} model")

    def projection_matrix(self, n: int) -> np.ndarray:
        """Dense E_n on V_depth."""
        self._check_power(n)
        op = sparse.identity(self.dim(self.depth), format="csr")
        for level in range(self.depth, self.depth - n, -1):
            star = (sparse.diags(_safe_inverse(self.masses[level - 1])) @ self.S[level].T
                    @ sparse.diags(self.masses[level]))
            op = star @ op
        for level in range(self.depth - n + 1, self.depth + 1):
            op = self.S[level] @ op
        return op.toarray()

    def averages(self, fn: FunctionLike, order: int = 8) -> Vector:
        """Lebesgue cylinder averages of fn at the top level (arrays pass through)."""
        if not callable(fn):
            values = np.asarray(fn, dtype=float)
            if values.shape != (self.dim(self.depth),):
                raise InvalidArgumentError(f"expected {self.dim(self.depth)} cylinder values, got {values.shape}")
            return values
        a, b = self.lower[self.depth], self.upper[self.depth]
        return integrate_pieces(fn, a, b, order) / (b - a)

    def isometry_residual(self, trials: int = 8, seed: int = DEFAULT_SEED) -> float:
        """max |<S f, S g> - <f, g>| over random f, g on every level, plus max |S* S f - f|."""
        rng = make_rng(seed)
        worst = 0.0
        for level in range(1, self.depth + 1):
            for _ in range(trials):
                f = rng.standard_normal(self.dim(level - 1))
                g = rng.standard_normal(self.dim(level - 1))
                Sf, Sg = self.apply_S(f, level), self.apply_S(g, level)
                worst = max(worst, abs(self.inner(Sf, Sg, level) - self.inner(f, g, level - 1)))
                support = self.masses[level - 1] > 0
                back = self.apply_S_star(Sf, level)
                worst = max(worst, float(np.max(np.abs(back[support] - f[support]), initial=0.0)))
        return worst


def _image_classes(branch_map: BranchMap) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    pairs = sorted({(float(a), float(b)) for a, b in zip(branch_map.image_lower, branch_map.image_upper)})
    lower = np.array([a for a, _ in pairs])
    upper = np.array([b for _, b in pairs])
    if np.any(lower[1:] < upper[:-1]):
        raise InvalidArgumentError(f"{branch_map.label}: branch images overlap without coinciding")
    lookup = {pair: i for i, pair in enumerate(pairs)}
    classes = np.array([lookup[(float(a), float(b))] for a, b in zip(branch_map.image_lower, branch_map.image_upper)])
    return lower, upper, classes


def koopman_system(branch_map: BranchMap, mu, depth: int, k_limit: int = 0,
                   tol: float = ARITHMETIC_TOL) -> KoopmanSystem:
    """
    Build the depth-`depth` cylinder model of S for a sigma-invariant measure mu.

    Args:
        branch_map: The map
        mu: Any measure with a vectorized mass(a, b)
        depth: Deepest cylinder level
        k_limit: Branch cap for countable maps
        tol: Allowed defect of sigma-invariance at cylinder level

    Raises:
        NotInvariantError: If mu(sigma^{-1} C) differs from mu(C) by more than tol for some cylinder C
    """
    depth = require_positive_int(depth, "depth")
    if branch_map.is_countable:
        tol = tol + branch_map.tail_mass_bound
    class_lower, class_upper, classes = _image_classes(branch_map)
    words: List[List[SymbolWord]] = [[(i,) for i in range(class_lower.size)]]
    lower, upper = [class_lower], [class_upper]
    masses = [np.asarray(mu.mass(class_lower, class_upper), dtype=float)]
    S: List[Optional[sparse.csr_matrix]] = [None]
    residual = 0.0

    index: Dict[SymbolWord, int] = {}
    for level in range(1, depth + 1):
        level_words = admissible_words(branch_map, level, k_limit)
        intervals = [decode(branch_map, w) for w in level_words]
        a = np.array([iv.lower for iv in intervals])
        b = np.array([iv.upper for iv in intervals])
        if level == 1:
            parents = np.array([classes[branch_map.position_of(w[0])] for w in level_words])
        else:
            parents = np.array([index[w[1:]] for w in level_words])
        rows = np.arange(len(level_words))
        S_level = sparse.csr_matrix(
            (np.ones(rows.size), (rows, parents)), shape=(rows.size, masses[-1].size)
        )
        level_masses = np.asarray(mu.mass(a, b), dtype=float)
        residual = max(residual, float(np.max(np.abs(S_level.T @ level_masses - masses[-1]))))
        words.append(level_words)
        lower.append(a)
        upper.append(b)
        masses.append(level_masses)
        S.append(S_level)
        index = {w: i for i, w in enumerate(level_words)}

    if residual > tol:
        raise NotInvariantError(residual)
    logger.info(f"Koopman model {branch_map.label} depth {depth}: {masses[-1].size} cylinders, "
                f"invariance residual {residual:.3e}")
    return KoopmanSystem(branch_map, depth, words, lower, upper, masses, S, residual)


def adjoint_residual(K: KoopmanSystem, trials: int = 8, seed: int = DEFAULT_SEED) -> float:
    """max |<S f, g> - <f, S* g>| on random vectors across levels."""
    rng = make_rng(seed)
    worst = 0.0
    for level in range(1, K.depth + 1):
        for _ in range(trials):
            f = rng.standard_normal(K.dim(level - 1))
            g = rng.standard_normal(K.dim(level))
            lhs = K.inner(K.apply_S(f, level), g, level)
            rhs = K.inner(f, K.apply_S_star(g, level), level - 1)
            worst = max(worst, abs(lhs - rhs))
    return worst


def is_isometry(K: KoopmanSystem, tol: float = HARMONIC_TOL) -> bool:
    return K.isometry_residual() <= tol
