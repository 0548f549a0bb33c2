"""
Gauss-Legendre quadrature helpers.
"""
from functools import lru_cache
from typing import Callable, Tuple

import numpy as np

from config.settings import DEFAULT_QUADRATURE_ORDER


@lru_cache(maxsize=32)
def legendre_rule(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1]."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def interval_nodes(a: np.ndarray, b: np.ndarray, order: int = DEFAULT_QUADRATURE_ORDER):
    """
    Map the Legendre rule onto many intervals at once.

    Args:
        a: Left endpoints, shape (m,)
        b: Right endpoints, shape (m,)
        order: Number of nodes per interval

    Returns:
        Tuple (x, w) of shape (m, order): nodes and already-scaled weights
    """
    nodes, weights = legendre_rule(order)
    a = np.asarray(a, dtype=float)[:, None]
    b = np.asarray(b, dtype=float)[:, None]
    half = 0.5 * (b - a)
    x = a + half * (nodes[None, :] + 1.0)
    w = half * weights[None, :]
    return x, w


def integrate_pieces(
    fn: Callable[[np.ndarray], np.ndarray],
    a: np.ndarray,
    b: np.ndarray,
    order: int = DEFAULT_QUADRATURE_ORDER,
) -> np.ndarray:
    """Integral of fn over each [a_i, b_i]."""
    if np.size(a) == 0:
        return np.zeros(0)
    x, w = interval_nodes(a, b, order)
    return (np.asarray(fn(x), dtype=float) * w).sum(axis=1)


def composite_integral(
    fn: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    panels: int = 64,
    order: int = 16,
) -> float:
    """Composite Gauss-Legendre integral of a smooth fn over [a, b]."""
    if b <= a:
        return 0.0
    edges = np.linspace(a, b, panels + 1)
    return float(integrate_pieces(fn, edges[:-1], edges[1:], order).sum())
