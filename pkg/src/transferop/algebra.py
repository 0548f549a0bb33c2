"""
Algebraic structure of transfer operators: the pull-out property, the kernel
decomposition f = f0 + fbar, the operator E = R(f) o sigma, Doob transforms,
cocycles and conjugation.
"""
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from config.logging_config import operator_logger as logger
from config.settings import ARITHMETIC_TOL, DEFAULT_SAMPLES, HARMONIC_TOL, IDENTITY_TOL
from src.core.exceptions import (
    InvalidArgumentError,
    NormalizationRequiredError,
    NotConjugateError,
    NotHarmonicError,
)
from src.dynamics.branch_map import BranchMap
from src.utils.quadrature import composite_integral
from src.utils.sampling import quasi_random_points
from src.utils.validators import require_positive_function
from .base_operator import BaseTransferOperator, GridFn
from .operators import ConjugateTransferOperator, DoobTransferOperator, WeightedTransferOperator
from .weights import pf_weight


def check_pullout(R: BaseTransferOperator, f: GridFn, g: GridFn,
                  samples: int = DEFAULT_SAMPLES, seed: int = 0) -> float:
    """max over quasi-random x of |R((f o sigma) g)(x) - f(x) R(g)(x)|."""
    x = quasi_random_points(samples, seed)
    lhs = R.apply(lambda y: np.asarray(f(np.asarray(R.sigma(y)))) * np.asarray(g(y)), x)
    rhs = np.asarray(f(x)) * R.apply(g, x)
    return float(np.max(np.abs(lhs - rhs)))


def require_normalized(R: BaseTransferOperator, tol: float = ARITHMETIC_TOL) -> None:
    residual = R.normalization_residual()
    if residual > tol + R.tail_mass_bound:
        raise NormalizationRequiredError(residual)


def expectation_E(R: BaseTransferOperator, f: GridFn) -> GridFn:
    """E(f) = R(f) o sigma for a normalized R."""
    require_normalized(R)
    return lambda y: R.apply(f, R.sigma(np.asarray(y, dtype=float)))


def kernel_decompose(R: BaseTransferOperator, f: GridFn) -> Tuple[GridFn, GridFn]:
    """
    Split f = f0 + fbar with R(f0) = 0 and fbar = R(f) o sigma constant on fibers.

    Raises:
        NormalizationRequiredError: If R(1) != 1 on samples
    """
    fbar = expectation_E(R, f)

    def f0(y):
        return np.asarray(f(y), dtype=float) - fbar(y)

    return f0, fbar


def conditional_expectation_residual(R: BaseTransferOperator, density: GridFn, f: GridFn, g: GridFn,
                                     panels: int = 64) -> float:
    """
    |int E(f) (g o sigma) dmu - int f (g o sigma) dmu| for mu = density dx.

    Zero when mu is sigma-invariant and mu R = mu, i.e. when E is the
    conditional expectation onto sigma^{-1}(B).
    """
    E = expectation_E(R, f)

    def lhs(x):
        return E(x) * np.asarray(g(R.sigma(x))) * density(x)

    def rhs(x):
        return np.asarray(f(x)) * np.asarray(g(R.sigma(x))) * density(x)

    return abs(composite_integral(lhs, 0.0, 1.0, panels) - composite_integral(rhs, 0.0, 1.0, panels))


def doob(R: BaseTransferOperator, k: GridFn, k_label: str = "k",
         samples: int = DEFAULT_SAMPLES) -> BaseTransferOperator:
    """
    Doob transform R_k(f) = R(f k) / k, with weight W_k(y) = W(y) k(y) / k(sigma y).

    Raises:
        InvalidArgumentError: If k <= 0 at a sample point (the location is reported)
    """
    require_positive_function(k, quasi_random_points(samples, seed=3), "k")
    if isinstance(R, WeightedTransferOperator):
        base_weight = R.weight

        def weight(y):
            y = np.asarray(y, dtype=float)
            return np.asarray(base_weight(y)) * np.asarray(k(y)) / np.asarray(k(R.branch_map.sigma(y)))

        return WeightedTransferOperator(R.branch_map, weight, f"{R.weight_label}|doob({k_label})")
    return DoobTransferOperator(R, k, k_label)


def density_operator(branch_map: BranchMap, density: GridFn, label: str = "rho") -> BaseTransferOperator:
    """Transfer operator on densities: the Perron-Frobenius operator Doob-transformed by rho."""
    pf = WeightedTransferOperator(branch_map, pf_weight(branch_map), "pf")
    return doob(pf, density, label)


def harmonic_residual(R: BaseTransferOperator, h: GridFn, samples: int = DEFAULT_SAMPLES) -> float:
    x = quasi_random_points(samples, seed=5)
    return float(np.max(np.abs(R.apply(h, x) - np.asarray(h(x)))))


@dataclass(frozen=True)
class CocycleResult:
    """
    Residuals of the cocycle identity for alpha_j(x) = h(sigma^{j-1} x) ... h(x).

    `residual` is max |R(alpha_{k+1}) - h alpha_k|, which follows from the
    pull-out property and R(h) = h for every k. `literal_residual` is
    max |R(alpha_{k+1}) - h^{k+1}|, the closed form that agrees with it only
    for k = 1 or when h o sigma^i = h.
    """

    k: int
    residual: float
    literal_residual: float
    harmonic_residual: float


def _alpha(R: BaseTransferOperator, h: GridFn, factors: int) -> GridFn:
    def alpha(y):
        point = np.asarray(y, dtype=float)
        value = np.ones(point.shape)
        for i in range(factors):
            value = value * np.asarray(h(point))
            if i < factors - 1:
                point = np.asarray(R.sigma(point))
        return value

    return alpha


def cocycle_check(R: BaseTransferOperator, h: GridFn, k: int = 1,
                  samples: int = DEFAULT_SAMPLES) -> CocycleResult:
    """
    Check R(alpha_h(., sigma^{k+1})) = h alpha_h(., sigma^k) on quasi-random points.

    Raises:
        NotHarmonicError: If max |R(h) - h| exceeds the harmonic tolerance
    """
    if k < 1:
        raise InvalidArgumentError(f"k must be >= 1, got {k}")
    h_residual = harmonic_residual(R, h, samples)
    if h_residual > HARMONIC_TOL + R.tail_mass_bound:
        raise NotHarmonicError(h_residual)
    x = quasi_random_points(samples, seed=11)
    lhs = R.apply(_alpha(R, h, k + 1), x)
    hx = np.asarray(h(x), dtype=float)
    provable = hx * _alpha(R, h, k)(x)
    literal = hx ** (k + 1)
    result = CocycleResult(
        k=k,
        residual=float(np.max(np.abs(lhs - provable))),
        literal_residual=float(np.max(np.abs(lhs - literal))),
        harmonic_residual=h_residual,
    )
    if result.literal_residual > HARMONIC_TOL:
        logger.warning(
            f"cocycle k={k}: closed form h^{k + 1} is off by {result.literal_residual:.3e}; "
            f"iterated identity residual {result.residual:.3e}"
        )
    return result


def conjugate(R: BaseTransferOperator, T: GridFn, T_inv: GridFn, target: Optional[BranchMap] = None,
              samples: int = DEFAULT_SAMPLES, tol: float = ARITHMETIC_TOL,
              label: str = "T") -> ConjugateTransferOperator:
    """
    Transport R along an invertible point map T.

    Args:
        R: Operator for sigma
        T, T_inv: Mutually inverse maps of [0, 1)
        target: Optional map sigma' claimed to satisfy T o sigma = sigma' o T
        samples: Number of quasi-random check points
        tol: Allowed intertwining deviation
        label: Name used in the operator label

    Returns:
        R' acting as f -> R(f o T) o T^{-1}

    Raises:
        InvalidArgumentError: If T and T_inv are not inverse on samples
        NotConjugateError: If the intertwining with `target` fails
    """
    y = quasi_random_points(samples, seed=13)
    inverse_gap = max(
        float(np.max(np.abs(T(T_inv(y)) - y))),
        float(np.max(np.abs(T_inv(T(y)) - y))),
    )
    if inverse_gap > IDENTITY_TOL:
        raise InvalidArgumentError(f"T and T_inv are not mutually inverse (gap {inverse_gap:.3e})")
    if target is not None:
        deviation = float(np.max(np.abs(T(np.asarray(R.sigma(y))) - np.asarray(target.sigma(T(y))))))
        if deviation > tol:
            raise NotConjugateError(deviation)
    return ConjugateTransferOperator(R, T, T_inv, target, label)
