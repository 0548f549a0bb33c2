"""
IFS measures: probability vectors, cylinder tables, chaos-game samples and the IFS diagnostics.
"""

from .probability import ProbabilityVector, gauss_branch_masses
from .base_ifs import IFSMeasure
from .cylinders import CylinderTable, ifs_measure_cylinders
from .chaos_game import SampleCloud, chaos_game, load_samples
from .integration import (
    branch_integral,
    branch_integrals,
    branch_mass,
    branch_masses,
    moment,
    sigma_invariance_residual,
    sigma_power,
)
from .diagnostics import (
    IFSVerdict,
    MomentReport,
    PkEstimate,
    extract_all_pk,
    extract_pk,
    ifs_test,
    moment_invariance_test,
)

__all__ = [
    'ProbabilityVector',
    'gauss_branch_masses',
    'IFSMeasure',
    'CylinderTable',
    'ifs_measure_cylinders',
    'SampleCloud',
    'chaos_game',
    'load_samples',
    'branch_integral',
    'branch_integrals',
    'branch_mass',
    'branch_masses',
    'moment',
    'sigma_invariance_residual',
    'sigma_power',
    'IFSVerdict',
    'MomentReport',
    'PkEstimate',
    'extract_all_pk',
    'extract_pk',
    'ifs_test',
    'moment_invariance_test',
]
