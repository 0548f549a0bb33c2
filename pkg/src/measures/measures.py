"""
Measure kinds: grid histograms, finite atomic measures and closed-form densities.
"""
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np

from config.logging_config import measure_logger as logger
from config.settings import IDENTITY_TOL
from src.core.exceptions import InvalidArgumentError
from src.utils.grid import cell_edges, cell_midpoints, cell_of
from src.utils.quadrature import composite_integral, integrate_pieces
from src.utils.validators import require_nonnegative_array, require_positive_int
from .base_measure import BaseMeasure

_PRUNE_RELATIVE = 1e-14


class HistogramMeasure(BaseMeasure):
    """Measure with constant density on each cell of the uniform n-grid."""

    kind = "histogram"

    def __init__(self, masses: np.ndarray):
        masses = require_nonnegative_array(masses, "cell masses")
        if masses.ndim != 1 or masses.size < 1:
            raise InvalidArgumentError("histogram needs a non-empty 1-d array of cell masses")
        if not masses.sum() > 0.0:
            raise InvalidArgumentError("histogram has no mass")
        self.masses = masses
        self._cumulative = np.concatenate(([0.0], np.cumsum(masses)))

    @property
    def n(self) -> int:
        return int(self.masses.size)

    @property
    def total_mass(self) -> float:
        return float(self._cumulative[-1])

    @property
    def density(self) -> np.ndarray:
        return self.masses * self.n

    @property
    def midpoints(self) -> np.ndarray:
        return cell_midpoints(self.n)

    def normalized(self) -> "HistogramMeasure":
        return HistogramMeasure(self.masses / self.total_mass)

    def cdf(self, x) -> np.ndarray:
        x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
        c = cell_of(x, self.n)
        return self._cumulative[c] + self.masses[c] * (x * self.n - c)

    def mass(self, a, b) -> np.ndarray:
        return self.cdf(b) - self.cdf(a)

    def integrate(self, fn, a: float = 0.0, b: float = 1.0) -> float:
        edges = cell_edges(self.n)
        lo = np.maximum(edges[:-1], a)
        hi = np.minimum(edges[1:], b)
        cells = np.flatnonzero((hi > lo) & (self.masses > 0))
        if cells.size == 0:
            return 0.0
        pieces = integrate_pieces(fn, lo[cells], hi[cells], order=8)
        return float(np.dot(pieces, self.density[cells]))

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "n": self.n, "cells": self.masses.tolist()}


class AtomicMeasure(BaseMeasure):
    """
    Finite combination of Dirac masses.

    Atoms closer than `tol` are merged (their masses added) and atoms with
    mass below 1e-14 of the total are dropped, so pushforwards that produce
    the same point along different float paths stay a single atom.
    """

    kind = "atomic"

    def __init__(self, locations: Iterable[float], masses: Iterable[float], tol: float = IDENTITY_TOL):
        locations = np.asarray(list(locations) if not isinstance(locations, np.ndarray) else locations, dtype=float)
        masses = require_nonnegative_array(
            np.asarray(list(masses) if not isinstance(masses, np.ndarray) else masses, dtype=float), "atom masses"
        )
        if locations.shape != masses.shape or locations.ndim != 1:
            raise InvalidArgumentError("atom locations and masses must be 1-d arrays of equal length")
        if locations.size and (locations.min() < -tol or locations.max() > 1.0 + tol):
            raise InvalidArgumentError("atom locations must lie in [0, 1)")
        order = np.argsort(locations, kind="stable")
        locations, masses = locations[order], masses[order]
        if locations.size:
            # merge runs of atoms within tol
            starts = np.concatenate(([True], np.diff(locations) > tol))
            groups = np.cumsum(starts) - 1
            merged_masses = np.bincount(groups, weights=masses)
            merged_locations = locations[starts]
            total = merged_masses.sum()
            keep = merged_masses > _PRUNE_RELATIVE * total
            locations, masses = merged_locations[keep], merged_masses[keep]
        self.locations = locations
        self.masses = masses
        self.tol = tol

    @classmethod
    def dirac(cls, x: float, mass: float = 1.0) -> "AtomicMeasure":
        return cls([x], [mass])

    @classmethod
    def from_atoms(cls, atoms: Iterable[Tuple[float, float]]) -> "AtomicMeasure":
        atoms = list(atoms)
        return cls([a for a, _ in atoms], [m for _, m in atoms])

    @property
    def total_mass(self) -> float:
        return float(self.masses.sum())

    @property
    def size(self) -> int:
        return int(self.locations.size)

    def atoms(self) -> List[Tuple[float, float]]:
        return [(float(x), float(m)) for x, m in zip(self.locations, self.masses)]

    def index_of(self, x: float) -> int:
        """Position of the atom within tol of x, or -1."""
        i = int(np.searchsorted(self.locations, x - self.tol, side="left"))
        if i < self.size and abs(self.locations[i] - x) <= self.tol:
            return i
        return -1

    def mass_at(self, x: float) -> float:
        i = self.index_of(x)
        return float(self.masses[i]) if i >= 0 else 0.0

    def cdf(self, x) -> np.ndarray:
        cumulative = np.concatenate(([0.0], np.cumsum(self.masses)))
        return cumulative[np.searchsorted(self.locations, np.asarray(x, dtype=float), side="right")]

    def mass(self, a, b) -> np.ndarray:
        cumulative = np.concatenate(([0.0], np.cumsum(self.masses)))
        lo = np.searchsorted(self.locations, np.asarray(a, dtype=float), side="left")
        hi = np.searchsorted(self.locations, np.asarray(b, dtype=float), side="left")
        return cumulative[hi] - cumulative[lo]

    def integrate(self, fn, a: float = 0.0, b: float = 1.0) -> float:
        inside = (self.locations >= a) & (self.locations < b)
        if not np.any(inside):
            return 0.0
        return float(np.dot(np.asarray(fn(self.locations[inside]), dtype=float), self.masses[inside]))

    def is_close(self, other: "AtomicMeasure", tol: float = IDENTITY_TOL) -> bool:
        return atomic_distance(self, other) <= tol

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "atoms": [[x, m] for x, m in self.atoms()]}


def atomic_distance(first: AtomicMeasure, second: AtomicMeasure) -> float:
    """Total variation distance after aligning atoms within tolerance."""
    tol = max(first.tol, second.tol)
    combined = AtomicMeasure(
        np.concatenate([first.locations, second.locations]),
        np.concatenate([first.masses, second.masses]),
        tol=tol,
    )
    diff = [abs(first.mass_at(x) - second.mass_at(x)) for x in combined.locations]
    return float(sum(diff))


class ClosedFormMeasure(BaseMeasure):
    """Measure with a density and antiderivative known in closed form."""

    kind = "closed_form"

    def __init__(self, label: str, density: Callable[[np.ndarray], np.ndarray],
                 cdf: Callable[[np.ndarray], np.ndarray], params: Optional[Dict[str, Any]] = None):
        self.label = label
        self.density = density
        self._cdf = cdf
        self.params = params or {}

    @property
    def total_mass(self) -> float:
        return float(self._cdf(np.array(1.0)) - self._cdf(np.array(0.0)))

    def cdf(self, x) -> np.ndarray:
        return self._cdf(np.clip(np.asarray(x, dtype=float), 0.0, 1.0)) - self._cdf(np.array(0.0))

    def mass(self, a, b) -> np.ndarray:
        return self.cdf(b) - self.cdf(a)

    def integrate(self, fn, a: float = 0.0, b: float = 1.0) -> float:
        return composite_integral(lambda x: np.asarray(fn(x), dtype=float) * self.density(x), a, b,
                                  panels=16, order=20)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "label": self.label, **self.params}


def lebesgue() -> ClosedFormMeasure:
    return ClosedFormMeasure("lebesgue", lambda x: np.ones_like(np.asarray(x, dtype=float)), lambda x: x)


def gauss_mu0() -> ClosedFormMeasure:
    """Gauss measure dx / ((1 + x) ln 2), with exact logarithmic antiderivative."""
    return ClosedFormMeasure(
        "gauss_mu0",
        lambda x: 1.0 / ((1.0 + np.asarray(x, dtype=float)) * np.log(2.0)),
        lambda x: np.log1p(x) / np.log(2.0),
    )


def linear() -> ClosedFormMeasure:
    """Density 2x."""
    return ClosedFormMeasure("linear", lambda x: 2.0 * np.asarray(x, dtype=float), lambda x: np.asarray(x) ** 2)


def riesz_coefficients(n: int, start: int = 1) -> Tuple[np.ndarray, np.ndarray]:
    """
    Cosine expansion of prod_{k=start}^{n} (1 + cos(2 pi (2 3^k) x)).

    Returns:
        Tuple (frequencies F >= 0, coefficients c_F) with the product equal to
        sum_F c_F cos(2 pi F x)
    """
    terms: Dict[int, float] = {0: 1.0}
    for k in range(start, n + 1):
        g = 2 * 3 ** k
        nxt: Dict[int, float] = {}
        for f, c in terms.items():
            nxt[f] = nxt.get(f, 0.0) + c
            nxt[f + g] = nxt.get(f + g, 0.0) + 0.5 * c
            nxt[abs(f - g)] = nxt.get(abs(f - g), 0.0) + 0.5 * c
        terms = nxt
    freqs = np.array(sorted(terms), dtype=float)
    coeffs = np.array([terms[int(f)] for f in freqs])
    return freqs, coeffs


def riesz_partial(n: int, start: int = 1) -> ClosedFormMeasure:
    """
    Partial Riesz product on the circle parametrized by x = t / (2 pi):
    density prod_{k=start}^{n} (1 + cos(2 3^k t)).
    """
    if n < 0:
        raise InvalidArgumentError(f"n must be >= 0, got {n}")
    freqs, coeffs = riesz_coefficients(n, start)
    positive = freqs > 0

    def density(x):
        x = np.asarray(x, dtype=float)
        value = np.ones(x.shape)
        for k in range(start, n + 1):
            value = value * (1.0 + np.cos(4.0 * np.pi * 3 ** k * x))
        return value

    def cdf(x):
        x = np.asarray(x, dtype=float)
        flat = x.reshape(-1)
        out = np.empty(flat.shape)
        f = freqs[positive]
        c = coeffs[positive] / (2.0 * np.pi * f)
        for s in range(0, flat.size, 64):
            chunk = flat[s:s + 64]
            out[s:s + 64] = coeffs[~positive].sum() * chunk + np.sin(2.0 * np.pi * np.outer(chunk, f)) @ c
        return out.reshape(x.shape)

    return ClosedFormMeasure("riesz_partial", density, cdf, {"n": n, "start": start})


def discretize(mu: BaseMeasure, n: int) -> HistogramMeasure:
    """Cell masses of mu on the n-grid."""
    n = require_positive_int(n, "n")
    if isinstance(mu, AtomicMeasure):
        masses = np.bincount(cell_of(mu.locations, n), weights=mu.masses, minlength=n)
        return HistogramMeasure(masses)
    edges = cell_edges(n)
    cdf = np.asarray(mu.cdf(edges), dtype=float)
    cdf[-1] = mu.total_mass if not isinstance(mu, HistogramMeasure) else cdf[-1]
    return HistogramMeasure(np.clip(np.diff(cdf), 0.0, None))


# Registry of named closed-form measures
MEASURES: Dict[str, Callable[..., ClosedFormMeasure]] = {
    "lebesgue": lebesgue,
    "mu0": gauss_mu0,
    "gauss_mu0": gauss_mu0,
    "linear": linear,
    "riesz": riesz_partial,
    "riesz_partial": riesz_partial,
}


def get_measure(label: str, **kwargs) -> Optional[ClosedFormMeasure]:
    """
    Get a closed-form measure for the specified label.

    Returns:
        The measure, or None if the label is not supported
    """
    factory = MEASURES.get(label.lower())
    if not factory:
        logger.error(f"Measure '{label}' not supported.")
        logger.info(f"Available measures: {', '.join(MEASURES.keys())}")
        return None
    return factory(**kwargs)


def from_dict(payload: Dict[str, Any]) -> BaseMeasure:
    """Rebuild a measure serialized with to_dict."""
    kind = payload.get("kind")
    if kind == HistogramMeasure.kind:
        return HistogramMeasure(np.asarray(payload["cells"], dtype=float))
    if kind == AtomicMeasure.kind:
        return AtomicMeasure.from_atoms((float(x), float(m)) for x, m in payload["atoms"])
    if kind == ClosedFormMeasure.kind:
        params = {k: v for k, v in payload.items() if k not in ("kind", "label")}
        measure = get_measure(payload["label"], **params)
        if measure is None:
            raise InvalidArgumentError(f"unknown closed-form measure {payload['label']!r}")
        return measure
    raise InvalidArgumentError(f"unknown measure kind {kind!r}")
