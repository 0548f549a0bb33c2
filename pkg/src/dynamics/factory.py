"""
Factory for creating branch maps by label.
"""
from typing import Callable, Dict, Optional, Sequence

import numpy as np

from config.logging_config import dynamics_logger as logger
from config.settings import IDENTITY_TOL
from src.core.exceptions import InvalidArgumentError
from src.utils.validators import require_positive_int
from .branch_map import BranchMap


def make_affine_map(
    label: str,
    lower: Sequence[float],
    upper: Sequence[float],
    image_lower: Sequence[float],
    image_upper: Sequence[float],
    indices: Optional[Sequence[int]] = None,
) -> BranchMap:
    """
    Build a map whose branches are increasing affine bijections J_p -> image_p.

    Args:
        label: Map identifier
        lower, upper: Branch intervals [lower_p, upper_p)
        image_lower, image_upper: Image intervals of each branch
        indices: Branch labels (defaults to 0..K-1)

    Returns:
        A validated BranchMap
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    image_lower = np.asarray(image_lower, dtype=float)
    image_upper = np.asarray(image_upper, dtype=float)
    slope = (image_upper - image_lower) / (upper - lower)
    indices = np.arange(lower.size) if indices is None else np.asarray(indices, dtype=np.int64)

    def inverse(pos, x):
        return lower[pos] + (x - image_lower[pos]) / slope[pos]

    def forward(pos, y):
        return image_lower[pos] + (y - lower[pos]) * slope[pos]

    def inverse_slope(pos, x):
        return np.zeros(np.broadcast(pos, x).shape) + 1.0 / slope[pos]

    branch_map = BranchMap(
        label=label,
        indices=indices,
        lower=lower,
        upper=upper,
        image_lower=image_lower,
        image_upper=image_upper,
        inverse_fn=inverse,
        forward_fn=forward,
        inverse_slope_fn=inverse_slope,
    )
    branch_map.validate()
    return branch_map


def make_doubling() -> BranchMap:
    """sigma(x) = 2x mod 1 with J_0 = [0, 1/2), J_1 = [1/2, 1)."""
    return make_affine_map("doubling", [0.0, 0.5], [0.5, 1.0], [0.0, 0.0], [1.0, 1.0])


def make_tripling() -> BranchMap:
    """sigma(x) = 3x mod 1."""
    edges = np.arange(4) / 3.0
    edges[-1] = 1.0
    return make_affine_map("tripling", edges[:-1], edges[1:], np.zeros(3), np.ones(3))


def make_twin_doubling() -> BranchMap:
    """Two disjoint doubling copies: [0, 1/2) and [1/2, 1) are each invariant."""
    return make_affine_map(
        "twin_doubling",
        [0.0, 0.25, 0.5, 0.75],
        [0.25, 0.5, 0.75, 1.0],
        [0.0, 0.0, 0.5, 0.5],
        [0.5, 0.5, 1.0, 1.0],
    )


def make_cell_permutation(n: int, perm: Optional[Sequence[int]] = None) -> BranchMap:
    """Invertible map translating cell i of the n-grid onto cell perm[i] (cyclic shift by default)."""
    n = require_positive_int(n, "n", minimum=2)
    perm = np.roll(np.arange(n), -1) if perm is None else np.asarray(perm, dtype=np.int64)
    if sorted(perm.tolist()) != list(range(n)):
        raise InvalidArgumentError(f"perm must be a permutation of 0..{n - 1}")
    edges = np.arange(n + 1) / n
    return make_affine_map(
        f"permutation_{n}", edges[:-1], edges[1:], perm / n, (perm + 1) / n
    )


def make_gauss(k_max: int = 1000) -> BranchMap:
    """
    Gauss map sigma(x) = 1/x - floor(1/x), truncated after k_max branches.

    Branch k (1-based) is J_k = (1/(k+1), 1/k] with tau_k(x) = 1/(k + x); the
    uncovered tail (0, 1/(k_max+1)] has Lebesgue mass tail_mass_bound.
    """
    if not isinstance(k_max, (int, np.integer)) or k_max < 1:
        raise InvalidArgumentError(f"k_max must be a positive integer, got {k_max!r}")
    k = np.arange(1, k_max + 1, dtype=float)

    def inverse(pos, x):
        return 1.0 / (pos + 1.0 + x)

    def forward(pos, y):
        return 1.0 / y - (pos + 1.0)

    def inverse_slope(pos, x):
        return 1.0 / (pos + 1.0 + x) ** 2

    # sigma(tau(x)) loses about one ulp of k + x
    tolerance = max(IDENTITY_TOL, 8.0 * np.finfo(float).eps * (k_max + 1))
    branch_map = BranchMap(
        label="gauss",
        indices=np.arange(1, k_max + 1),
        lower=1.0 / (k + 1.0),
        upper=1.0 / k,
        image_lower=np.zeros(k_max),
        image_upper=np.ones(k_max),
        inverse_fn=inverse,
        forward_fn=forward,
        inverse_slope_fn=inverse_slope,
        closed_right=True,
        k_max=int(k_max),
        tail_mass_bound=1.0 / (k_max + 1.0),
        tolerance=tolerance,
    )
    branch_map.validate(samples=64 if k_max > 1000 else 256)
    return branch_map


# Registry of available maps
MAPS: Dict[str, Callable[..., BranchMap]] = {
    "doubling": make_doubling,
    "tripling": make_tripling,
    "twin_doubling": make_twin_doubling,
    "gauss": make_gauss,
    "permutation": make_cell_permutation,
}


def get_map(label: str, **kwargs) -> Optional[BranchMap]:
    """
    Get a branch map for the specified label.

    Args:
        label: Name of the map
        **kwargs: Parameters passed to the map constructor (e.g. k_max for gauss)

    Returns:
        The requested BranchMap, or None if the label is not supported
    """
    factory = MAPS.get(label.lower())
    if not factory:
        logger.error(f"Map '{label}' not supported.")
        logger.info(f"Available maps: {', '.join(MAPS.keys())}")
        return None
    return factory(**kwargs)
