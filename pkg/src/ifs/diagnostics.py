"""
Diagnostics deciding whether a sigma-invariant measure is an IFS measure:
branch-probability extraction, the moment condition for R_p-invariance and
the cylinder product test.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from config.logging_config import ifs_logger as logger
from src.core.exceptions import DegenerateMeasureError, InvalidArgumentError
from src.dynamics.branch_map import BranchMap, SymbolWord
from src.dynamics.coding import admissible_words, decode
from .integration import (
    AnyMeasure,
    branch_count_for,
    branch_integrals,
    branch_mass,
    branch_masses,
    moment,
    sigma_invariance_residual,
    sigma_power,
)
from .probability import ProbabilityVector

_DEGENERATE = 1e-300
_INVARIANCE_GRID = 64
_INVARIANCE_TOL = 1e-6


@dataclass(frozen=True)
class PkEstimate:
    """
    Two readings of p_k for one branch.

    ratio is int_{J_k} sigma dmu / int x dmu. For a sigma-invariant mu the
    numerators over all branches add up to int x dmu; invariance_gap is how far
    they miss, and invariance_residual is the CDF distance between mu and its
    pullback under sigma. branch_mass is mu(J_k). For an IFS measure both
    readings agree.
    """

    k: int
    ratio: float
    branch_mass: float
    first_moment: float
    invariance_gap: float
    invariance_residual: float = 0.0

    @property
    def discrepancy(self) -> float:
        return abs(self.ratio - self.branch_mass)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "ratio": self.ratio,
            "branch_mass": self.branch_mass,
            "first_moment": self.first_moment,
            "invariance_gap": self.invariance_gap,
            "invariance_residual": self.invariance_residual,
        }


def _sigma_integrals(branch_map: BranchMap, mu: AnyMeasure, m: int = 1,
                     k_limit: Optional[int] = None) -> np.ndarray:
    return branch_integrals(mu, branch_map, sigma_power(branch_map, m), k_limit)


def _first_moment(mu: AnyMeasure) -> float:
    first = moment(mu, 1)
    if first <= _DEGENERATE:
        raise DegenerateMeasureError(f"int x dmu = {first!r}; p_k is undefined")
    return first


def _invariance_residual(branch_map: BranchMap, mu: AnyMeasure) -> float:
    residual = sigma_invariance_residual(mu, branch_map, _INVARIANCE_GRID)
    bound = _INVARIANCE_TOL + 2.0 * branch_map.tail_mass_bound
    if residual > bound:
        logger.warning(f"{branch_map.label}: measure is not sigma-invariant "
                       f"(CDF residual {residual:.3e} > {bound:.3e}); p_k ratios are unreliable")
    return residual


def extract_all_pk(branch_map: BranchMap, mu: AnyMeasure, k_limit: Optional[int] = None) -> List[PkEstimate]:
    """
    PkEstimate for every branch (the first k_limit branches of a countable map).

    Raises:
        DegenerateMeasureError: If int x dmu vanishes
    """
    first = _first_moment(mu)
    residual = _invariance_residual(branch_map, mu)
    # the gap always runs over every branch
    numerators = _sigma_integrals(branch_map, mu)
    gap = abs(float(numerators.sum()) - first)
    masses = branch_masses(mu, branch_map)
    count = branch_count_for(branch_map, k_limit)
    return [
        PkEstimate(
            k=int(branch_map.indices[pos]),
            ratio=float(numerators[pos] / first),
            branch_mass=float(masses[pos]),
            first_moment=first,
            invariance_gap=gap,
            invariance_residual=residual,
        )
        for pos in range(count)
    ]


def extract_pk(branch_map: BranchMap, mu: AnyMeasure, k: int) -> PkEstimate:
    """p_k by the integral ratio and by mu(J_k), for the branch labelled k."""
    pos = branch_map.position_of(k)
    first = _first_moment(mu)
    residual = _invariance_residual(branch_map, mu)
    numerators = _sigma_integrals(branch_map, mu)
    return PkEstimate(
        k=int(k),
        ratio=float(numerators[pos] / first),
        branch_mass=branch_mass(mu, branch_map, pos),
        first_moment=first,
        invariance_gap=abs(float(numerators.sum()) - first),
        invariance_residual=residual,
    )


@dataclass(frozen=True)
class MomentReport:
    """
    Violations of (int x dmu) int_{J_k} sigma^m dmu = (int x^m dmu) int_{J_k} sigma dmu.

    violations[k_pos, m-1] is the relative violation at branch position k_pos
    and moment m.
    """

    violations: np.ndarray
    p_extracted: np.ndarray
    tol: float
    p_mismatch: Optional[float] = None

    @property
    def max_violation(self) -> float:
        return float(self.violations.max()) if self.violations.size else 0.0

    @property
    def worst(self) -> Dict[str, int]:
        k_pos, m = np.unravel_index(int(np.argmax(self.violations)), self.violations.shape)
        return {"branch_position": int(k_pos), "m": int(m) + 1}

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.tol

    def to_dict(self) -> Dict[str, Any]:
        return {
            "max_violation": self.max_violation,
            "worst": self.worst,
            "passed": self.passed,
            "tol": self.tol,
            "p_extracted": self.p_extracted.tolist(),
            "p_mismatch": self.p_mismatch,
        }


def moment_invariance_test(branch_map: BranchMap, mu: AnyMeasure, p: Optional[ProbabilityVector] = None,
                           m_max: int = 5, k_limit: int = 10, tol: float = 1e-9) -> MomentReport:
    """
    Moment condition for mu to be R_p-invariant with p the extracted p_k.

    When p is given, its distance to the extracted values is reported as well.
    """
    if m_max < 1:
        raise InvalidArgumentError(f"m_max must be >= 1, got {m_max}")
    first = moment(mu, 1)
    if first <= _DEGENERATE:
        raise DegenerateMeasureError(f"int x dmu = {first!r}")
    sigma_first = _sigma_integrals(branch_map, mu, 1, k_limit)
    columns = []
    for m in range(1, m_max + 1):
        lhs = first * _sigma_integrals(branch_map, mu, m, k_limit)
        rhs = moment(mu, m) * sigma_first
        scale = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), _DEGENERATE)
        columns.append(np.abs(lhs - rhs) / scale)
    violations = np.column_stack(columns)
    p_extracted = np.array([e.ratio for e in extract_all_pk(branch_map, mu, k_limit)])
    mismatch = None
    if p is not None:
        size = min(p.size, p_extracted.size)
        mismatch = float(np.max(np.abs(p.p[:size] - p_extracted[:size])))
    report = MomentReport(violations, p_extracted, tol, mismatch)
    logger.info(f"moment test {branch_map.label}: max violation {report.max_violation:.3e} at {report.worst}")
    return report


@dataclass(frozen=True)
class IFSVerdict:
    is_ifs: bool
    p: np.ndarray
    words_checked: int
    witness: Optional[SymbolWord] = None
    measure_value: Optional[float] = None
    product_value: Optional[float] = None
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def gap(self) -> Optional[float]:
        if self.witness is None:
            return None
        return abs(self.measure_value - self.product_value)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "verdict": "IS_IFS" if self.is_ifs else "NOT_IFS",
            "p": self.p.tolist(),
            "words_checked": self.words_checked,
            "witness": list(self.witness) if self.witness is not None else None,
            "measure_value": self.measure_value,
            "product_value": self.product_value,
        }


def ifs_test(branch_map: BranchMap, mu: AnyMeasure, depth: int, k_limit: int = 10,
             tol: float = 1e-9) -> IFSVerdict:
    """
    Compare mu(decode(w)) with prod p_{k_i}, p_k = mu(J_k), over all words up to depth.

    Words are visited by length, then lexicographically; the first word off by
    more than tol is returned as the witness.
    """
    p = branch_masses(mu, branch_map)
    checked = 0
    for length in range(1, depth + 1):
        for word in admissible_words(branch_map, length, k_limit):
            interval = decode(branch_map, word)
            value = float(mu.mass(interval.lower, interval.upper))
            product = float(np.prod(p[branch_map.positions_of(word)]))
            checked += 1
            if abs(value - product) > tol:
                logger.info(f"{branch_map.label}: not an IFS measure, witness {word}: {value:.12g} vs {product:.12g}")
                return IFSVerdict(False, p, checked, word, value, product)
    logger.info(f"{branch_map.label}: IFS product rule holds on {checked} words up to depth {depth}")
    return IFSVerdict(True, p, checked)
