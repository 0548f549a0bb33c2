"""
Core components shared by every ruelle-lab package: typed errors and check records.
"""

from .checks import CheckResult, all_passed, failed
from .exceptions import (
    AbsoluteContinuityError,
    DegenerateMeasureError,
    HistoryExhaustedError,
    InconsistentCertificateError,
    InvalidArgumentError,
    InvalidCouplingError,
    InvalidPartitionError,
    InvalidWordError,
    InvariantSetViolationError,
    MustDiscretizeError,
    NoConvergenceError,
    NormalizationRequiredError,
    NotConjugateError,
    NotHarmonicError,
    NotInvariantError,
    RuelleLabError,
    SizeLimitError,
    TailEscapeError,
)

__all__ = [
    'CheckResult',
    'all_passed',
    'failed',
    'AbsoluteContinuityError',
    'DegenerateMeasureError',
    'HistoryExhaustedError',
    'InconsistentCertificateError',
    'InvalidArgumentError',
    'InvalidCouplingError',
    'InvalidPartitionError',
    'InvalidWordError',
    'InvariantSetViolationError',
    'MustDiscretizeError',
    'NoConvergenceError',
    'NormalizationRequiredError',
    'NotConjugateError',
    'NotHarmonicError',
    'NotInvariantError',
    'RuelleLabError',
    'SizeLimitError',
    'TailEscapeError',
]
