"""
Monte-Carlo realization of an IFS measure: the chaos game x <- tau_K(x), K ~ p.
"""
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np

from config.logging_config import ifs_logger as logger
from config.settings import DEFAULT_CHAINS, DEFAULT_SEED
from src.core.exceptions import InvalidArgumentError
from src.dynamics.branch_map import BranchMap
from src.measures.measures import HistogramMeasure
from src.utils.formatters import read_binary, write_binary
from src.utils.grid import cell_of
from src.utils.sampling import spawn_rngs
from src.utils.validators import require_positive_int
from .base_ifs import IFSMeasure
from .probability import ProbabilityVector


class SampleCloud(IFSMeasure):
    """Empirical measure of chaos-game samples, each with mass 1/count."""

    representation = "samples"

    def __init__(self, branch_map: BranchMap, pvec: ProbabilityVector, samples: np.ndarray,
                 seed: int, burn_in: int, n_chains: int):
        super().__init__(branch_map, pvec)
        self.samples = np.asarray(samples, dtype=float)
        self.seed = seed
        self.burn_in = burn_in
        self.n_chains = n_chains
        self._sorted = np.sort(self.samples)

    @property
    def count(self) -> int:
        return int(self.samples.size)

    def mass(self, a, b) -> np.ndarray:
        lo = np.searchsorted(self._sorted, np.asarray(a, dtype=float), side="left")
        hi = np.searchsorted(self._sorted, np.asarray(b, dtype=float), side="left")
        return (hi - lo) / self.count

    def integrate(self, fn, a: float = 0.0, b: float = 1.0) -> float:
        inside = self.samples[(self.samples >= a) & (self.samples < b)]
        if inside.size == 0:
            return 0.0
        return float(np.asarray(fn(inside), dtype=float).sum() / self.count)

    def histogram(self, n: int) -> HistogramMeasure:
        return HistogramMeasure(np.bincount(cell_of(self.samples, n), minlength=n) / self.count)

    def clt_band(self, mass: float) -> float:
        """4 sigma half-width of an empirical frequency with true value `mass`."""
        return 4.0 * float(np.sqrt(mass * (1.0 - mass) / self.count))

    def manifest(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "burn_in": self.burn_in,
            "count": self.count,
            "n_chains": self.n_chains,
            "map": self.branch_map.label,
            "p": self.pvec.p.tolist(),
        }

    def write(self, path: Union[str, Path]) -> Path:
        """Little-endian float64 samples plus a JSON manifest next to them."""
        return write_binary(path, self.samples, self.manifest())

    def to_dict(self) -> Dict[str, Any]:
        return {"representation": self.representation, **self.manifest()}


def load_samples(path: Union[str, Path]) -> np.ndarray:
    return read_binary(path)


def chaos_game(branch_map: BranchMap, pvec: ProbabilityVector, n_samples: int, burn_in: int = 100,
               seed: int = DEFAULT_SEED, n_chains: int = DEFAULT_CHAINS) -> SampleCloud:
    """
    Run n_chains chaos-game chains in lockstep and merge their samples by chain index.

    Chain c draws its branch choices from its own Philox stream spawned from
    `seed`, so a seed reproduces the same samples bit for bit.

    Args:
        branch_map: Full-branched map whose inverse branches are iterated
        pvec: Branch probabilities (truncated vectors are renormalized for drawing)
        n_samples: Number of recorded samples
        burn_in: Steps discarded at the start of every chain
        seed: Root seed
        n_chains: Number of parallel chains

    Returns:
        SampleCloud with exactly n_samples points
    """
    n_samples = require_positive_int(n_samples, "n_samples")
    n_chains = require_positive_int(n_chains, "n_chains")
    burn_in = require_positive_int(burn_in, "burn_in", minimum=0)
    if pvec.size != branch_map.branch_count:
        raise InvalidArgumentError(f"{branch_map.label} has {branch_map.branch_count} branches but p has {pvec.size}")
    if not branch_map.is_full:
        raise InvalidArgumentError(f"{branch_map.label}: the chaos game needs full branches")
    if pvec.is_truncated:
        logger.warning(f"p leaves tail mass {pvec.tail_mass:.3e}; drawing from the renormalized vector")

    n_chains = min(n_chains, n_samples)
    per_chain = -(-n_samples // n_chains)
    steps = burn_in + per_chain
    cumulative = np.cumsum(pvec.sampling_weights())
    rngs = spawn_rngs(seed, n_chains)
    x = np.array([rng.random() for rng in rngs])
    uniforms = np.stack([rng.random(steps) for rng in rngs])
    choices = np.minimum(np.searchsorted(cumulative, uniforms, side="right"), pvec.size - 1)

    samples = np.empty((n_chains, per_chain))
    for t in range(steps):
        x = branch_map.inverse_fn(choices[:, t], x)
        if t >= burn_in:
            samples[:, t - burn_in] = x
    merged = samples.reshape(-1)[:n_samples]
    logger.info(f"chaos game {branch_map.label}: {n_samples} samples from {n_chains} chains (seed {seed})")
    return SampleCloud(branch_map, pvec, merged, seed, burn_in, n_chains)
