"""
Weight functions W(y) on preimage points and the operator registry built on them.
"""
from typing import Callable, Dict, Optional

import numpy as np

from config.logging_config import operator_logger as logger
from src.core.exceptions import InvalidArgumentError
from src.dynamics.branch_map import BranchMap
from src.utils.expressions import parse_function
from .operators import WeightedTransferOperator, WeightFn


def half_weight(branch_map: BranchMap, expression: Optional[str] = None) -> WeightFn:
    """W = 1/2 (the normalized operator of the doubling map)."""
    return lambda y: np.full(np.shape(y), 0.5)


def uniform_weight(branch_map: BranchMap, expression: Optional[str] = None) -> WeightFn:
    """W = 1/K for a map with K full branches."""
    value = 1.0 / branch_map.branch_count
    return lambda y: np.full(np.shape(y), value)


def cos2_weight(branch_map: BranchMap, expression: Optional[str] = None) -> WeightFn:
    """W(y) = cos^2(pi y)."""
    return lambda y: np.cos(np.pi * np.asarray(y)) ** 2


def pf_weight(branch_map: BranchMap, expression: Optional[str] = None) -> WeightFn:
    """W(y) = 1/|sigma'(y)|: the Perron-Frobenius operator of Lebesgue measure."""
    return lambda y: branch_map.inverse_slope_at(y)


def riesz_weight(branch_map: BranchMap, expression: Optional[str] = None) -> WeightFn:
    """
    |m(e^{2 pi i y})|^2 / 3 with m(w) = (1 + w^2)/sqrt(2), normalized over the
    three preimages of the tripling map: W(y) = (1 + cos(4 pi y)) / 3.
    """
    return lambda y: (1.0 + np.cos(4.0 * np.pi * np.asarray(y))) / 3.0


def custom_weight(branch_map: BranchMap, expression: Optional[str] = None) -> WeightFn:
    """
    Weight given as an expression in `y`, e.g. "cos(pi*y)**2" or "1/2".

    Raises:
        InvalidArgumentError: If the expression is missing, does not parse, or
            uses symbols other than y
    """
    if not expression:
        raise InvalidArgumentError("custom weight needs an expression in y")
    return parse_function(expression, "y")


# Registry of available weights
WEIGHTS: Dict[str, Callable[..., WeightFn]] = {
    "half": half_weight,
    "uniform": uniform_weight,
    "cos2": cos2_weight,
    "pf": pf_weight,
    "riesz": riesz_weight,
    "custom": custom_weight,
}


def get_weight(label: str, branch_map: BranchMap, expression: Optional[str] = None) -> Optional[WeightFn]:
    """
    Get a weight function for the specified label.

    Args:
        label: Name of the weight
        branch_map: Map the weight will be used with
        expression: Expression in y, required for the "custom" label

    Returns:
        The weight function, or None if the label is not supported
    """
    factory = WEIGHTS.get(label.lower())
    if not factory:
        logger.error(f"Weight '{label}' not supported.")
        logger.info(f"Available weights: {', '.join(WEIGHTS.keys())}")
        return None
    return factory(branch_map, expression)


def make_operator(branch_map: BranchMap, weight_label: str, expression: Optional[str] = None) -> WeightedTransferOperator:
    """Weighted transfer operator for a registered weight label."""
    weight = get_weight(weight_label, branch_map, expression)
    if weight is None:
        raise InvalidArgumentError(f"unknown weight label {weight_label!r}; available: {', '.join(WEIGHTS)}")
    return WeightedTransferOperator(branch_map, weight, weight_label.lower())
