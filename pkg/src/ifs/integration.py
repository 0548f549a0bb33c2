"""
Branch integrals int_{J_k} g dmu for every measure kind.

Closed-form measures use composite Gauss-Legendre quadrature (their masses
come from exact antiderivatives); histograms, atomic measures, cylinder
tables and sample clouds use their own integrate().
"""
from typing import Callable, Optional, Union

import numpy as np

from src.dynamics.branch_map import BranchMap
from src.measures.base_measure import BaseMeasure
from src.utils.grid import cell_edges
from .base_ifs import IFSMeasure

AnyMeasure = Union[BaseMeasure, IFSMeasure]
BranchIntegrand = Callable[[np.ndarray, np.ndarray], np.ndarray]


def branch_count_for(branch_map: BranchMap, k_limit: Optional[int] = None) -> int:
    count = branch_map.branch_count
    return count if not k_limit or k_limit <= 0 else min(count, k_limit)


def branch_mass(mu: AnyMeasure, branch_map: BranchMap, pos: int) -> float:
    """mu(J_k) for the branch at position pos."""
    return float(mu.mass(branch_map.lower[pos], branch_map.upper[pos]))


def branch_masses(mu: AnyMeasure, branch_map: BranchMap, k_limit: Optional[int] = None) -> np.ndarray:
    count = branch_count_for(branch_map, k_limit)
    return np.asarray(mu.mass(branch_map.lower[:count], branch_map.upper[:count]), dtype=float)


def branch_integral(mu: AnyMeasure, branch_map: BranchMap, pos: int, g: BranchIntegrand) -> float:
    """int_{J_pos} g(pos, x) dmu(x)."""
    return mu.integrate(lambda x: g(np.full(np.shape(x), pos), x),
                        float(branch_map.lower[pos]), float(branch_map.upper[pos]))


def branch_integrals(mu: AnyMeasure, branch_map: BranchMap, g: BranchIntegrand,
                     k_limit: Optional[int] = None) -> np.ndarray:
    count = branch_count_for(branch_map, k_limit)
    return np.array([branch_integral(mu, branch_map, pos, g) for pos in range(count)])


def sigma_power(branch_map: BranchMap, m: int) -> BranchIntegrand:
    """g(pos, x) = sigma_pos(x)^m, evaluated branchwise so boundary points stay on their branch."""
    return lambda pos, x: np.asarray(branch_map.forward(pos, x), dtype=float) ** m


def moment(mu: AnyMeasure, m: int) -> float:
    """int x^m dmu."""
    return mu.integrate(lambda x: np.asarray(x, dtype=float) ** m)


def sigma_invariance_residual(mu: AnyMeasure, branch_map: BranchMap, n: int = 64) -> float:
    """
    sup over grid edges e of |mu(sigma^{-1}[0, e)) - mu([0, e))|.

    On a truncated map the preimage misses the tail, so the residual carries
    up to the mass of [0, 1/(k_max+1)).
    """
    edges = cell_edges(n)
    zeros = np.zeros(edges.shape)
    pulled = np.zeros(edges.shape)
    for p in range(branch_map.branch_count):
        pos = np.full(edges.shape, p)
        a = branch_map.inverse_fn(pos, zeros)
        b = branch_map.inverse_fn(pos, edges)
        pulled += np.asarray(mu.mass(np.minimum(a, b), np.maximum(a, b)), dtype=float)
    return float(np.max(np.abs(pulled - np.asarray(mu.mass(zeros, edges), dtype=float))))
