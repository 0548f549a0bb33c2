"""
Couplings on a finite space and the positive operators they correspond to.

A coupling nu on X x X has marginals mu1 (row sums) and mu2 (column sums).
It determines the row-stochastic operator P[x, y] = nu[x, y] / mu1(x), and
conversely nu[x, y] = mu1(x) P[x, y]; the two maps are mutually inverse and
affine.
"""
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from config.logging_config import hilbert_logger as logger
from config.settings import IDENTITY_TOL
from src.core.exceptions import InvalidCouplingError


@dataclass(frozen=True)
class Coupling:
    joint: np.ndarray

    def __post_init__(self):
        joint = np.asarray(self.joint, dtype=float)
        if joint.ndim != 2 or joint.shape[0] != joint.shape[1]:
            raise InvalidCouplingError(f"a coupling on X x X needs a square matrix, got shape {joint.shape}")
        if not np.all(np.isfinite(joint)) or np.any(joint < 0):
            raise InvalidCouplingError("coupling entries must be finite and nonnegative")
        object.__setattr__(self, "joint", joint)

    @property
    def size(self) -> int:
        return int(self.joint.shape[0])

    @property
    def mu1(self) -> np.ndarray:
        return self.joint.sum(axis=1)

    @property
    def mu2(self) -> np.ndarray:
        return self.joint.sum(axis=0)

    def marginal_residual(self, mu1: np.ndarray, mu2: np.ndarray) -> float:
        return float(max(np.max(np.abs(self.mu1 - mu1)), np.max(np.abs(self.mu2 - mu2))))


def _check_stochastic(P: np.ndarray, tol: float) -> np.ndarray:
    P = np.asarray(P, dtype=float)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise InvalidCouplingError(f"operator must be a square matrix, got shape {P.shape}")
    if np.any(P < 0):
        raise InvalidCouplingError("operator entries must be nonnegative")
    defect = float(np.max(np.abs(P.sum(axis=1) - 1.0)))
    if defect > tol:
        raise InvalidCouplingError(f"operator rows must sum to 1 (max defect {defect:.3e})")
    return P


def coupling_to_operator(nu: Coupling) -> np.ndarray:
    """
    P[x, .] = nu(x, .) / mu1(x), the conditional measure on the fiber over x.

    Rows over atoms with mu1(x) = 0 carry no information; they are set to the
    row of the identity so that P(1) = 1 everywhere.
    """
    mu1 = nu.mu1
    P = np.zeros_like(nu.joint)
    positive = mu1 > 0
    P[positive] = nu.joint[positive] / mu1[positive, None]
    empty = np.flatnonzero(~positive)
    if empty.size:
        logger.debug(f"{empty.size} zero-mass atom(s) in mu1; identity rows used there")
        P[empty, empty] = 1.0
    return P


def operator_to_coupling(P: np.ndarray, mu1: Sequence[float], tol: float = IDENTITY_TOL) -> Coupling:
    """
    nu[x, y] = mu1(x) P[x, y]; its marginals are (mu1, mu1 P).

    Raises:
        InvalidCouplingError: If P is not row-stochastic or mu1 is not a nonnegative vector of matching size
    """
    P = _check_stochastic(P, tol)
    mu1 = np.asarray(mu1, dtype=float)
    if mu1.shape != (P.shape[0],) or np.any(mu1 < 0):
        raise InvalidCouplingError("mu1 must be a nonnegative vector matching the operator size")
    return Coupling(mu1[:, None] * P)


def composition_matrix(sigma: Sequence[int]) -> np.ndarray:
    """0/1 matrix of f -> f o sigma for a self-map of {0, ..., m-1}."""
    sigma = np.asarray(sigma, dtype=np.int64)
    m = sigma.size
    if np.any(sigma < 0) or np.any(sigma >= m):
        raise InvalidCouplingError(f"sigma must map into 0..{m - 1}")
    S = np.zeros((m, m))
    S[np.arange(m), sigma] = 1.0
    return S


def deterministic_coupling(sigma: Sequence[int], mu: Sequence[float]) -> Coupling:
    """nu(A x B) = mu(A intersect sigma^{-1} B)."""
    mu = np.asarray(mu, dtype=float)
    return Coupling(mu[:, None] * composition_matrix(sigma))


def product_coupling(mu1: Sequence[float], mu2: Sequence[float]) -> Coupling:
    """The independent coupling mu1 x mu2 (normalized so its marginals are mu1 and mu2)."""
    mu1 = np.asarray(mu1, dtype=float)
    mu2 = np.asarray(mu2, dtype=float)
    total = mu2.sum()
    if total <= 0:
        raise InvalidCouplingError("mu2 must have positive mass")
    return Coupling(np.outer(mu1, mu2 / total))
