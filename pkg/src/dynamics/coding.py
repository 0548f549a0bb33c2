"""
Symbolic coding: itineraries of points and the cylinder intervals of words.
"""
from typing import Dict, List

import numpy as np

from src.core.exceptions import InvalidWordError, TailEscapeError
from src.utils.validators import require_positive_int
from .branch_map import BranchMap, Interval, SymbolWord


def encode(branch_map: BranchMap, x: float, depth: int) -> SymbolWord:
    """
    Itinerary (k_1, ..., k_m) of x: sigma^{i-1}(x) lies in J_{k_i}.

    Raises:
        TailEscapeError: If an iterate falls outside every branch; `step` is
            the 1-based position of the symbol that could not be read
    """
    word = []
    point = float(x)
    for step in range(1, depth + 1):
        pos = int(branch_map.branch_of(point))
        if pos < 0:
            raise TailEscapeError(step=step, point=point)
        word.append(int(branch_map.indices[pos]))
        if step < depth:
            point = float(branch_map.forward(np.array(pos), np.array(point)))
    return tuple(word)


def decode(branch_map: BranchMap, word: SymbolWord) -> Interval:
    """
    Cylinder interval tau_{k_1} o ... o tau_{k_m}(image of k_m), endpoints ordered.

    Raises:
        InvalidWordError: If a label is unknown or the word is not admissible
    """
    if len(word) == 0:
        return Interval(0.0, 1.0)
    positions = branch_map.positions_of(word)
    last = positions[-1]
    lo, hi = branch_map.image_lower[last], branch_map.image_upper[last]
    for i in range(len(positions) - 1, -1, -1):
        p = positions[i]
        # the running interval must lie in the image of the branch applied next
        lo = max(lo, branch_map.image_lower[p])
        hi = min(hi, branch_map.image_upper[p])
        if hi <= lo:
            raise InvalidWordError(f"{branch_map.label}: word {word} is not admissible")
        a, b = branch_map.inverse_fn(np.array([p, p]), np.array([lo, hi]))
        lo, hi = (a, b) if a <= b else (b, a)
    return Interval(float(lo), float(hi))


def successors(branch_map: BranchMap) -> Dict[int, List[int]]:
    """Branch positions q allowed after p: J_q meets the image of branch p in positive length."""
    out = {}
    for p in range(branch_map.branch_count):
        overlap = np.minimum(branch_map.upper, branch_map.image_upper[p]) - np.maximum(
            branch_map.lower, branch_map.image_lower[p]
        )
        out[p] = np.flatnonzero(overlap > 0).tolist()
    return out


def admissible_words(branch_map: BranchMap, depth: int, k_limit: int = 0) -> List[SymbolWord]:
    """
    All admissible words of exactly `depth` symbols, in lexicographic label order.

    Args:
        branch_map: The map
        depth: Word length (0 gives the empty word)
        k_limit: If positive, only the first k_limit branch positions are used

    Returns:
        List of words
    """
    if depth == 0:
        return [()]
    require_positive_int(depth, "depth")
    count = branch_map.branch_count if k_limit <= 0 else min(k_limit, branch_map.branch_count)
    allowed = successors(branch_map)
    order = sorted(range(count), key=lambda p: branch_map.indices[p])
    paths = [[p] for p in order]
    for _ in range(depth - 1):
        paths = [path + [q] for path in paths for q in order if q in allowed[path[-1]]]
    return [tuple(int(branch_map.indices[p]) for p in path) for path in paths]
