"""
Measures on [0, 1), the dual action mu -> mu R, Ulam discretization and fixed-point solvers.
"""

from .base_measure import BaseMeasure
from .measures import (
    MEASURES,
    AtomicMeasure,
    ClosedFormMeasure,
    HistogramMeasure,
    atomic_distance,
    discretize,
    from_dict,
    gauss_mu0,
    get_measure,
    lebesgue,
    linear,
    riesz_coefficients,
    riesz_partial,
)
from .ulam import UlamMatrix, column_sum_defect, matrix_for, pushforward_matrix, ulam_matrix
from .action import (
    absolute_continuity_violations,
    act_on_measure,
    derivative_pairing_residual,
    is_absolutely_continuous,
    radon_nikodym,
)
from .solvers import (
    FixedPointResult,
    HarmonicResult,
    harmonic_function,
    harmonic_invariance_residual,
    invariant_density,
    second_eigenvalue,
)
from .examples import (
    filter_normalization_checks,
    riesz_invariance_residual,
    riesz_partial_density,
    riesz_partial_mass,
    verify_table1,
)

__all__ = [
    'BaseMeasure',
    'MEASURES',
    'AtomicMeasure',
    'ClosedFormMeasure',
    'HistogramMeasure',
    'atomic_distance',
    'discretize',
    'from_dict',
    'gauss_mu0',
    'get_measure',
    'lebesgue',
    'linear',
    'riesz_coefficients',
    'riesz_partial',
    'UlamMatrix',
    'column_sum_defect',
    'matrix_for',
    'pushforward_matrix',
    'ulam_matrix',
    'absolute_continuity_violations',
    'act_on_measure',
    'derivative_pairing_residual',
    'is_absolutely_continuous',
    'radon_nikodym',
    'FixedPointResult',
    'HarmonicResult',
    'harmonic_function',
    'harmonic_invariance_residual',
    'invariant_density',
    'second_eigenvalue',
    'filter_normalization_checks',
    'riesz_invariance_residual',
    'riesz_partial_density',
    'riesz_partial_mass',
    'verify_table1',
]
