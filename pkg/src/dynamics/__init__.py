"""
Interval endomorphisms with explicit inverse branches, symbolic coding and the solenoid lift.
"""

from .branch_map import BranchMap, Interval, SymbolWord
from .factory import (
    MAPS,
    get_map,
    make_affine_map,
    make_cell_permutation,
    make_doubling,
    make_gauss,
    make_tripling,
    make_twin_doubling,
)
from .coding import admissible_words, decode, encode
from .pieces import BranchPieces, branch_pieces, grid_pieces
from .solenoid import SolenoidPoint, solenoid_drop, solenoid_lift, solenoid_orbit, solenoid_residual

__all__ = [
    'BranchMap',
    'Interval',
    'SymbolWord',
    'MAPS',
    'get_map',
    'make_affine_map',
    'make_cell_permutation',
    'make_doubling',
    'make_gauss',
    'make_tripling',
    'make_twin_doubling',
    'admissible_words',
    'decode',
    'encode',
    'BranchPieces',
    'branch_pieces',
    'grid_pieces',
    'SolenoidPoint',
    'solenoid_drop',
    'solenoid_lift',
    'solenoid_orbit',
    'solenoid_residual',
]
