"""
Transition kernels of transfer operators and the Markov chains they drive,
fibered operators on finite partitions, and the Parry Jacobian.
"""

from .riesz import RieszFamily, riesz_family
from .paths import (
    MarkovReport,
    PathSample,
    StationarityReport,
    markov_property_test,
    sample_path,
    stationarity_test,
)
from .fibered import FiberedOperator, fibered_operator
from .parry import ParryJacobian, parry_jacobian

__all__ = [
    'RieszFamily',
    'riesz_family',
    'MarkovReport',
    'PathSample',
    'StationarityReport',
    'markov_property_test',
    'sample_path',
    'stationarity_test',
    'FiberedOperator',
    'fibered_operator',
    'ParryJacobian',
    'parry_jacobian',
]
