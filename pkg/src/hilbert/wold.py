"""
Wold decomposition of the Koopman isometry and the exactness diagnostic.

E_n = S^n S*^n projects onto the functions measurable with respect to
sigma^{-n}(B). The ranges decrease; what survives every n is H_inf, and the
differences E_k - E_{k+1} are the shift layers S^k (ker S*).
"""
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
import pandas as pd

from config.logging_config import hilbert_logger as logger
from config.settings import HARMONIC_TOL
from src.core.exceptions import SizeLimitError
from src.utils.validators import require_positive_int
from .koopman import FunctionLike, KoopmanSystem

_DENSE_LIMIT = 1024
_RANK_TOL = 1e-6


@dataclass(frozen=True)
class WoldDecomposition:
    """
    Attributes:
        projections: Dense E_1 ... E_N on the top level
        h_inf_basis: Columns span range(E_N), orthonormal in the mu inner product
        shift_layers: shift_layers[k] spans range(E_k) minus range(E_{k+1}), mu-orthonormal columns
    """

    projections: List[np.ndarray]
    h_inf_basis: np.ndarray
    shift_layers: List[np.ndarray]
    idempotence_residual: float
    decreasing_residual: float
    orthogonality_residual: float
    h_inf_residual: float

    @property
    def h_inf_dim(self) -> int:
        return int(self.h_inf_basis.shape[1])

    @property
    def layer_dims(self) -> List[int]:
        return [int(layer.shape[1]) for layer in self.shift_layers]

    def passed(self, tol: float = HARMONIC_TOL) -> bool:
        return max(self.idempotence_residual, self.decreasing_residual,
                   self.orthogonality_residual, self.h_inf_residual) <= tol


def _orthonormal_range(P: np.ndarray, masses: np.ndarray) -> np.ndarray:
    """mu-orthonormal basis of range(P) for a mu-self-adjoint projection P."""
    root = np.sqrt(masses)
    inv_root = np.divide(1.0, root, out=np.zeros_like(root), where=root > 0)
    symmetric = (root[:, None] * P) * inv_root[None, :]
    symmetric = 0.5 * (symmetric + symmetric.T)
    values, vectors = np.linalg.eigh(symmetric)
    keep = values > 1.0 - _RANK_TOL
    return inv_root[:, None] * vectors[:, keep]


def _gram(A: np.ndarray, B: np.ndarray, masses: np.ndarray) -> np.ndarray:
    return A.T @ (masses[:, None] * B)


def wold(K: KoopmanSystem, depth: int) -> WoldDecomposition:
    """
    Projections E_1..E_N, H_inf and the shift layers of the top-level model.

    Raises:
        SizeLimitError: If the top level has more than 1024 cylinders (the
            decomposition is dense)
    """
    N = require_positive_int(depth, "depth")
    if N > K.depth:
        N = K.depth
        logger.warning(f"Wold depth capped at the model depth {K.depth}")
    size = K.dim(K.depth)
    if size > _DENSE_LIMIT:
        raise SizeLimitError(f"dense Wold decomposition limited to {_DENSE_LIMIT} cylinders, model has {size}")
    masses = K.masses[K.depth]

    projections = [np.eye(size)] + [K.projection_matrix(n) for n in range(1, N + 1)]
    idempotence = max(float(np.max(np.abs(E @ E - E))) for E in projections[1:])
    decreasing = max(
        float(np.max(np.abs(projections[n + 1] @ projections[n] - projections[n + 1]))) for n in range(N)
    )

    h_inf = _orthonormal_range(projections[N], masses)
    layers = [_orthonormal_range(projections[k] - projections[k + 1], masses) for k in range(N)]

    blocks = layers + [h_inf]
    orthogonality = 0.0
    for i, first in enumerate(blocks):
        if first.shape[1] == 0:
            continue
        gram = _gram(first, first, masses)
        orthogonality = max(orthogonality, float(np.max(np.abs(gram - np.eye(gram.shape[0])))))
        for second in blocks[i + 1:]:
            if second.shape[1]:
                orthogonality = max(orthogonality, float(np.max(np.abs(_gram(first, second, masses)))))

    # S S* restricted to H_inf is the identity
    h_inf_residual = 0.0
    for column in h_inf.T:
        h_inf_residual = max(h_inf_residual, float(np.max(np.abs(K.project_onto_past(column, 1) - column))))

    result = WoldDecomposition(
        projections=projections[1:],
        h_inf_basis=h_inf,
        shift_layers=layers,
        idempotence_residual=idempotence,
        decreasing_residual=decreasing,
        orthogonality_residual=orthogonality,
        h_inf_residual=h_inf_residual,
    )
    logger.info(f"Wold {K.branch_map.label}: dim H_inf = {result.h_inf_dim}, layers {result.layer_dims}")
    return result


@dataclass(frozen=True)
class ExactnessScore:
    """
    norms[n] = ||E_n f - mean f|| for n = 0..N.

    A sequence that reaches zero is evidence of exactness; a plateau above
    tolerance flags a nontrivial tail sigma-algebra, and `limit` is the
    centred projection at the last step.
    """

    norms: np.ndarray
    mean: float
    limit: np.ndarray
    plateau_tol: float

    @property
    def monotone(self) -> bool:
        return bool(np.all(np.diff(self.norms) <= 1e-8))

    @property
    def plateau(self) -> bool:
        return bool(self.norms[-1] > self.plateau_tol)

    def to_frame(self, layer_dims: Optional[List[int]] = None) -> pd.DataFrame:
        frame = pd.DataFrame({"n": np.arange(self.norms.size), "norm": self.norms})
        if layer_dims is not None:
            dims = list(layer_dims) + [None] * (self.norms.size - len(layer_dims))
            frame["layer_dim"] = dims[: self.norms.size]
        return frame


def exactness_score(K: KoopmanSystem, f: FunctionLike, depth: int, plateau_tol: float = 1e-6) -> ExactnessScore:
    """
    Norms ||E_n f - mean_mu f||_mu for n = 0..N.

    f is either a callable, replaced by its cylinder averages, or a vector of
    top-level cylinder values.
    """
    N = min(require_positive_int(depth, "depth"), K.depth)
    values = K.averages(f)
    mean = K.mean(values)
    norms = []
    centred = values - mean
    for n in range(N + 1):
        centred = K.project_onto_past(values, n) - mean
        norms.append(K.norm(centred))
    score = ExactnessScore(np.array(norms), mean, centred, plateau_tol)
    logger.info(f"exactness {K.branch_map.label}: norms {np.array2string(score.norms, precision=3)}")
    return score
