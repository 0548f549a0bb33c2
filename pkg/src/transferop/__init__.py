"""
Pointwise weighted transfer operators and their algebraic structure.
"""

from .base_operator import BaseTransferOperator
from .operators import (
    CombinedTransferOperator,
    ComposedTransferOperator,
    ConjugateTransferOperator,
    DoobTransferOperator,
    RestrictedTransferOperator,
    WeightedTransferOperator,
)
from .weights import WEIGHTS, get_weight, make_operator
from .algebra import (
    CocycleResult,
    check_pullout,
    cocycle_check,
    conditional_expectation_residual,
    conjugate,
    density_operator,
    doob,
    expectation_E,
    harmonic_residual,
    kernel_decompose,
    require_normalized,
)
from .restriction import (
    decomposition_residual,
    ergodic_decomposition,
    invariance_violations,
    invariant_cell_sets,
    restrict,
    transition_graph,
)

__all__ = [
    'BaseTransferOperator',
    'CombinedTransferOperator',
    'ComposedTransferOperator',
    'ConjugateTransferOperator',
    'DoobTransferOperator',
    'RestrictedTransferOperator',
    'WeightedTransferOperator',
    'WEIGHTS',
    'get_weight',
    'make_operator',
    'CocycleResult',
    'check_pullout',
    'cocycle_check',
    'conditional_expectation_residual',
    'conjugate',
    'density_operator',
    'doob',
    'expectation_E',
    'harmonic_residual',
    'kernel_decompose',
    'require_normalized',
    'decomposition_residual',
    'ergodic_decomposition',
    'invariance_violations',
    'invariant_cell_sets',
    'restrict',
    'transition_graph',
]
