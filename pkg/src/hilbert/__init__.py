"""
Hilbert-space structure: the Koopman isometry and its Wold decomposition, the
universal Hilbert space on atomic measures, and couplings on finite spaces.
"""

from .koopman import KoopmanSystem, adjoint_residual, is_isometry, koopman_system
from .wold import ExactnessScore, WoldDecomposition, exactness_score, wold
from .universal import (
    HilbertPair,
    adjointness_residual,
    align,
    k1_defect,
    uhs_equivalent,
    uhs_inner,
    uhs_norm,
    uhs_R,
    uhs_S,
)
from .couplings import (
    Coupling,
    composition_matrix,
    coupling_to_operator,
    deterministic_coupling,
    operator_to_coupling,
    product_coupling,
)

__all__ = [
    'KoopmanSystem',
    'adjoint_residual',
    'is_isometry',
    'koopman_system',
    'ExactnessScore',
    'WoldDecomposition',
    'exactness_score',
    'wold',
    'HilbertPair',
    'adjointness_residual',
    'align',
    'k1_defect',
    'uhs_equivalent',
    'uhs_inner',
    'uhs_norm',
    'uhs_R',
    'uhs_S',
    'Coupling',
    'composition_matrix',
    'coupling_to_operator',
    'deterministic_coupling',
    'operator_to_coupling',
    'product_coupling',
]
