"""
The universal Hilbert space on atomic measures.

A pair (f, mu) stands for the class f sqrt(dmu). Two pairs are equivalent
when f sqrt(dmu/dlambda) = g sqrt(dnu/dlambda) with lambda = mu + nu; on
atoms this says the amplitudes f(a) sqrt(mu(a)) agree, so every class is
determined by its amplitude on each atom.
"""
from dataclasses import dataclass
from typing import Callable, Optional, Tuple, Union

import numpy as np

from config.logging_config import hilbert_logger as logger
from config.settings import ARITHMETIC_TOL, IDENTITY_TOL
from src.core.exceptions import InconsistentCertificateError, InvalidArgumentError
from src.measures.action import act_on_measure
from src.measures.measures import AtomicMeasure, atomic_distance
from src.transferop.algebra import require_normalized
from src.transferop.base_operator import BaseTransferOperator


@dataclass(frozen=True)
class HilbertPair:
    """f sqrt(dmu) for an atomic mu: atom locations, atom masses and f on the atoms."""

    locations: np.ndarray
    masses: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        locations = np.atleast_1d(np.asarray(self.locations, dtype=float))
        masses = np.atleast_1d(np.asarray(self.masses, dtype=float))
        values = np.atleast_1d(np.asarray(self.values, dtype=float))
        if not (locations.shape == masses.shape == values.shape) or locations.ndim != 1:
            raise InvalidArgumentError("pair needs equal-length location, mass and value arrays")
        if np.any(masses < 0):
            raise InvalidArgumentError("atom masses must be nonnegative")
        order = np.argsort(locations, kind="stable")
        object.__setattr__(self, "locations", locations[order])
        object.__setattr__(self, "masses", masses[order])
        object.__setattr__(self, "values", values[order])

    @classmethod
    def from_measure(cls, mu: AtomicMeasure, f: Union[Callable[[np.ndarray], np.ndarray], float]) -> "HilbertPair":
        values = f(mu.locations) if callable(f) else np.full(mu.size, float(f))
        return cls(mu.locations, mu.masses, values)

    @classmethod
    def zero(cls) -> "HilbertPair":
        return cls(np.zeros(0), np.zeros(0), np.zeros(0))

    @property
    def measure(self) -> AtomicMeasure:
        return AtomicMeasure(self.locations, self.masses)

    @property
    def amplitudes(self) -> np.ndarray:
        """f(a) sqrt(mu(a)) per atom."""
        return self.values * np.sqrt(self.masses)

    @property
    def size(self) -> int:
        return int(self.locations.size)


def align(a: HilbertPair, b: HilbertPair, tol: float = IDENTITY_TOL) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Amplitudes of a and b on the union of their atoms (atoms within tol are identified).

    Returns:
        Tuple (locations, amplitudes of a, amplitudes of b)
    """
    locations = np.concatenate([a.locations, b.locations])
    owner = np.concatenate([np.zeros(a.size, dtype=int), np.ones(b.size, dtype=int)])
    amplitudes = np.concatenate([a.amplitudes, b.amplitudes])
    order = np.argsort(locations, kind="stable")
    locations, owner, amplitudes = locations[order], owner[order], amplitudes[order]
    if locations.size == 0:
        return locations, np.zeros(0), np.zeros(0)
    starts = np.concatenate(([True], np.diff(locations) > tol))
    groups = np.cumsum(starts) - 1
    count = int(groups[-1]) + 1
    first = np.zeros(count)
    second = np.zeros(count)
    np.add.at(first, groups[owner == 0], amplitudes[owner == 0])
    np.add.at(second, groups[owner == 1], amplitudes[owner == 1])
    return locations[starts], first, second


def uhs_equivalent(a: HilbertPair, b: HilbertPair, tol: float = IDENTITY_TOL) -> bool:
    """f sqrt(dmu/dlambda) = g sqrt(dnu/dlambda) atomwise with lambda = mu + nu."""
    _, first, second = align(a, b)
    return bool(np.all(np.abs(first - second) <= tol))


def uhs_inner(a: HilbertPair, b: HilbertPair) -> float:
    """int f g sqrt(dmu/dlambda) sqrt(dnu/dlambda) dlambda."""
    _, first, second = align(a, b)
    return float(np.dot(first, second))


def uhs_norm(a: HilbertPair) -> float:
    return float(np.sqrt(np.sum(a.values ** 2 * a.masses)))


def uhs_S(R: BaseTransferOperator, a: HilbertPair, require_normalized_operator: bool = True) -> HilbertPair:
    """
    S^(f, mu) = (f o sigma, mu R).

    The atoms of mu R are the preimages tau_k(x) of the atoms x of mu, and
    f o sigma takes the value f(x) there.

    Raises:
        NormalizationRequiredError: If R(1) != 1 (apply doob first)
    """
    if require_normalized_operator:
        require_normalized(R)
    if a.size == 0:
        return HilbertPair.zero()
    points, weights = R.kernel(a.locations)
    masses = weights * a.masses[None, :]
    values = np.broadcast_to(a.values[None, :], points.shape)
    keep = masses > 0
    return HilbertPair(points[keep], masses[keep], values[keep])


def _pushforward(R: BaseTransferOperator, mu: AtomicMeasure) -> AtomicMeasure:
    """mu o sigma^{-1} for an atomic mu."""
    images = np.atleast_1d(np.asarray(R.sigma(mu.locations), dtype=float))
    return AtomicMeasure(images, mu.masses, tol=mu.tol)


def k1_defect(R: BaseTransferOperator, mu: AtomicMeasure) -> float:
    """Total variation distance between (mu o sigma^{-1}) R and mu; zero iff mu is in K_1."""
    return atomic_distance(act_on_measure(R, _pushforward(R, mu)), mu)


def uhs_R(R: BaseTransferOperator, b: HilbertPair, k1_certificate: Optional[bool] = None,
          tol: float = IDENTITY_TOL) -> HilbertPair:
    """
    R^(g sqrt(dmu)) = R(g') sqrt(d(mu o sigma^{-1})).

    For mu in K_1, g' = g. Otherwise the pair is first rewritten on
    nu = (mu o sigma^{-1}) R, which lies in K_1, with g' = g sqrt(mu / nu) on
    the atoms of nu; what b carries outside supp nu is orthogonal to the
    range of S^ and maps to zero. A pair living entirely off supp nu
    therefore maps to the zero pair. This makes R^ S^ = I and
    <S^ a, b> = <a, R^ b> hold for all atomic pairs.

    Args:
        R: Normalized operator
        b: The pair
        k1_certificate: Caller's claim that mu is in K_1, checked against recomputation

    Raises:
        InconsistentCertificateError: If the certificate disagrees with the recomputed membership
    """
    if b.size == 0:
        return HilbertPair.zero()
    mu = b.measure
    defect = k1_defect(R, mu)
    in_k1 = defect <= max(tol, ARITHMETIC_TOL * mu.total_mass)
    if k1_certificate is not None and bool(k1_certificate) != in_k1:
        raise InconsistentCertificateError(
            f"certificate says mu {'is' if k1_certificate else 'is not'} in K_1 but the defect is {defect:.3e}"
        )

    images = np.atleast_1d(np.asarray(R.sigma(b.locations), dtype=float))
    base = AtomicMeasure(images, b.masses, tol=mu.tol)
    points, weights = R.kernel(base.locations)
    nu_masses = weights * base.masses[None, :]

    # g' on every preimage point: matched against the atoms of b
    g_prime = np.zeros(points.shape)
    flat_points = points.reshape(-1)
    flat_nu = nu_masses.reshape(-1)
    flat_g = g_prime.reshape(-1)
    index = np.searchsorted(b.locations, flat_points - tol, side="left")
    safe = np.clip(index, 0, b.size - 1)
    matched = (index < b.size) & (np.abs(b.locations[safe] - flat_points) <= tol) & (flat_nu > 0)
    ratio = np.divide(b.masses[safe], flat_nu, out=np.zeros_like(flat_nu), where=matched)
    flat_g[matched] = b.values[safe][matched] * np.sqrt(ratio[matched])

    values = (weights * g_prime).sum(axis=0)
    if not in_k1:
        logger.debug(f"{R.label}: pair outside K_1 (defect {defect:.3e}); rewritten on (mu o sigma^-1) R")
    return HilbertPair(base.locations, base.masses, values)


def adjointness_residual(R: BaseTransferOperator, a: HilbertPair, b: HilbertPair) -> float:
    """|<S^ a, b> - <a, R^ b>|."""
    return abs(uhs_inner(uhs_S(R, a), b) - uhs_inner(a, uhs_R(R, b)))
