"""
Utility functions: grids, sampling, quadrature, validation and artifact formatting.
"""

from .grid import FunctionOnGrid, cell_edges, cell_midpoints, cell_of
from .sampling import make_rng, quasi_random_points, spawn_rngs
from .quadrature import composite_integral, integrate_pieces, interval_nodes, legendre_rule
from .formatters import read_binary, to_json, write_binary, write_csv, write_json
from .expressions import parse_function
from .progress import progress, progress_enabled, set_progress

__all__ = [
    'FunctionOnGrid',
    'cell_edges',
    'cell_midpoints',
    'cell_of',
    'make_rng',
    'quasi_random_points',
    'spawn_rngs',
    'composite_integral',
    'integrate_pieces',
    'interval_nodes',
    'legendre_rule',
    'read_binary',
    'to_json',
    'write_binary',
    'write_csv',
    'write_json',
    'parse_function',
    'progress',
    'progress_enabled',
    'set_progress',
]
