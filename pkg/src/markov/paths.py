"""
Backward Markov chains driven by a Riesz family, and the statistical checks
run on them.

A path x0, x1, x2, ... draws x_{i+1} from mu_{x_i}, so sigma(x_{i+1}) = x_i.
Paths are simulated in chunks, each with its own generator spawned from the
seed, so the output does not depend on how many threads run the chunks.
"""
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from scipy import stats

from config.logging_config import markov_logger as logger
from config.settings import ARITHMETIC_TOL, DEFAULT_SAMPLES, DEFAULT_SEED
from src.core.checks import CheckResult
from src.core.exceptions import InvalidArgumentError, NormalizationRequiredError, TailEscapeError
from src.measures.base_measure import BaseMeasure
from src.measures.measures import AtomicMeasure, HistogramMeasure
from src.utils.formatters import write_binary
from src.utils.grid import cell_of
from src.utils.sampling import quasi_random_points, spawn_rngs
from src.utils.validators import require_positive_int
from .riesz import RieszFamily

StartLike = Union[float, HistogramMeasure, AtomicMeasure, None]

# tail resamples allowed, as a fraction of all transitions
_TAIL_BUDGET = 1e-3
_MAX_REDRAWS = 64


@dataclass
class PathSample:
    """chains[p, i] is x_i on path p."""

    chains: np.ndarray
    seed: int
    family_label: str
    tail_resamples: int = 0
    start: Dict[str, Any] = field(default_factory=dict)

    @property
    def n_paths(self) -> int:
        return int(self.chains.shape[0])

    @property
    def steps(self) -> int:
        return int(self.chains.shape[1] - 1)

    def relation_residual(self, sigma: Callable[[np.ndarray], np.ndarray]) -> float:
        """max |sigma(x_{i+1}) - x_i| over every transition."""
        if self.steps == 0:
            return 0.0
        images = np.asarray(sigma(self.chains[:, 1:].reshape(-1)), dtype=float).reshape(self.chains[:, 1:].shape)
        return float(np.max(np.abs(images - self.chains[:, :-1])))

    def to_frame(self) -> pd.DataFrame:
        paths, steps = np.indices(self.chains.shape)
        return pd.DataFrame({"path": paths.reshape(-1), "step": steps.reshape(-1), "x": self.chains.reshape(-1)})

    def manifest(self) -> Dict[str, Any]:
        return {
            "family": self.family_label,
            "seed": self.seed,
            "n_paths": self.n_paths,
            "steps": self.steps,
            "tail_resamples": self.tail_resamples,
            "start": self.start,
            "layout": "path-major",
        }

    def write(self, path) -> None:
        write_binary(path, self.chains, self.manifest())


def _start_spec(start: StartLike) -> Dict[str, Any]:
    if start is None:
        return {"kind": "lebesgue"}
    if isinstance(start, BaseMeasure):
        return {"kind": start.kind}
    return {"kind": "point", "x": float(start)}


def _draw_start(start: StartLike, size: int, rng: np.random.Generator) -> np.ndarray:
    if start is None:
        return rng.random(size)
    if isinstance(start, HistogramMeasure):
        p = start.masses / start.total_mass
        cells = rng.choice(start.n, size=size, p=p)
        return (cells + rng.random(size)) / start.n
    if isinstance(start, AtomicMeasure):
        p = start.masses / start.total_mass
        return start.locations[rng.choice(start.size, size=size, p=p)]
    if isinstance(start, BaseMeasure):
        raise InvalidArgumentError(f"cannot sample a start point from a {start.kind} measure; discretize it first")
    x0 = float(start)
    if not 0.0 <= x0 < 1.0:
        raise InvalidArgumentError(f"start point must lie in [0, 1), got {x0}")
    return np.full(size, x0)


def _require_probability_kernels(family: RieszFamily) -> None:
    """
    Every mu_x must be a probability measure. On a truncated map mu_x may fall
    short of mass one by at most twice the tail bound; those draws are redrawn.
    """
    mass = family.total_mass(quasi_random_points(DEFAULT_SAMPLES, seed=5))
    excess = float(np.max(mass - 1.0))
    shortfall = float(np.max(1.0 - mass))
    if excess > ARITHMETIC_TOL or shortfall > ARITHMETIC_TOL + 2.0 * family.operator.tail_mass_bound:
        raise NormalizationRequiredError(float(np.max(np.abs(mass - 1.0))))


def _sample_chunk(family: RieszFamily, start: StartLike, steps: int, size: int,
                  rng: np.random.Generator) -> Tuple[np.ndarray, int]:
    chains = np.empty((size, steps + 1))
    chains[:, 0] = _draw_start(start, size, rng)
    columns = np.arange(size)
    resamples = 0
    for i in range(steps):
        x = chains[:, i]
        points, weights = family.atoms(x)
        cumulative = np.cumsum(np.where(weights > 0, weights, 0.0), axis=0)
        u = rng.random(size)
        # u beyond the kernel's mass means the draw landed in the truncated tail
        escaped = u >= cumulative[-1]
        redraws = 0
        while escaped.any():
            resamples += int(escaped.sum())
            redraws += 1
            if redraws > _MAX_REDRAWS:
                culprit = int(np.flatnonzero(escaped)[0])
                raise TailEscapeError(i, float(x[culprit]), "kernel mass too small to sample from")
            u[escaped] = rng.random(int(escaped.sum()))
            escaped = u >= cumulative[-1]
        choice = (cumulative > u[None, :]).argmax(axis=0)
        chains[:, i + 1] = points[choice, columns]
    return chains, resamples


def sample_path(family: RieszFamily, start: StartLike = None, steps: int = 100, seed: int = DEFAULT_SEED,
                n_paths: int = 1, threads: int = 1, chunk_size: int = 4096) -> PathSample:
    """
    Simulate n_paths backward chains of the given length.

    Args:
        family: The kernels x -> mu_x
        start: A point in [0, 1), a histogram or atomic start distribution, or
            None for Lebesgue
        steps: Transitions per path
        seed: Seed of the whole run; chunk generators are spawned from it
        n_paths: Number of independent paths
        threads: Worker threads; results are identical for any value
        chunk_size: Paths per chunk

    Returns:
        PathSample with a (n_paths, steps + 1) array

    Raises:
        NormalizationRequiredError: If some mu_x has mass above one, or below
            one by more than the tail bound allows
        TailEscapeError: If more than 0.1% of transitions had to be redrawn
            because they fell into the uncovered tail of a truncated map
    """
    n_paths = require_positive_int(n_paths, "n_paths")
    steps = require_positive_int(steps, "steps", minimum=0)
    chunk_size = require_positive_int(chunk_size, "chunk_size")
    threads = require_positive_int(threads, "threads")
    _require_probability_kernels(family)

    sizes = [min(chunk_size, n_paths - offset) for offset in range(0, n_paths, chunk_size)]
    rngs = spawn_rngs(seed, len(sizes))
    results: List[Optional[Tuple[np.ndarray, int]]] = [None] * len(sizes)

    if threads == 1 or len(sizes) == 1:
        for index, (size, rng) in enumerate(zip(sizes, rngs)):
            results[index] = _sample_chunk(family, start, steps, size, rng)
    else:
        with ThreadPoolExecutor(max_workers=min(threads, len(sizes))) as executor:
            future_to_chunk = {
                executor.submit(_sample_chunk, family, start, steps, size, rng): index
                for index, (size, rng) in enumerate(zip(sizes, rngs))
            }
            for future in as_completed(future_to_chunk):
                results[future_to_chunk[future]] = future.result()

    chains = np.concatenate([chunk for chunk, _ in results], axis=0)
    resamples = sum(count for _, count in results)
    transitions = n_paths * steps
    if transitions and resamples > _TAIL_BUDGET * transitions:
        raise TailEscapeError(None, float("nan"),
                              f"{resamples} of {transitions} transitions fell into the truncated tail")
    if resamples:
        logger.warning(f"{family.label}: {resamples} tail draws resampled")
    logger.debug(f"sampled {n_paths} path(s) x {steps} steps from {family.label}")
    return PathSample(chains, seed, family.label, resamples, _start_spec(start))


@dataclass
class MarkovReport:
    """
    Per-bin comparison of f(x_{i+1}) with R(f)(x_i).

    z-scores pool the martingale differences f(x_{i+1}) - R(f)(x_i) of every
    transition whose x_i falls in a bin, scaled by the exact conditional
    variance R(f^2) - R(f)^2.
    """

    bin_means: np.ndarray
    bin_targets: np.ndarray
    z_scores: np.ndarray
    counts: np.ndarray
    threshold: float = 4.0

    @property
    def empty_bins(self) -> int:
        return int(np.sum(self.counts == 0))

    @property
    def max_z(self) -> float:
        return float(np.max(np.abs(self.z_scores))) if self.z_scores.size else 0.0

    @property
    def passed(self) -> bool:
        return self.max_z <= self.threshold

    def to_check(self, name: str = "markov.property") -> CheckResult:
        return CheckResult(name, self.passed, self.max_z,
                           f"max |z| over {self.counts.size - self.empty_bins} bins, {self.empty_bins} empty")

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "bin": np.arange(self.counts.size),
            "count": self.counts,
            "mean": self.bin_means,
            "target": self.bin_targets,
            "z": self.z_scores,
        })


def markov_property_test(family: RieszFamily, f: Callable[[np.ndarray], np.ndarray], n_paths: int = 1000,
                         steps: int = 50, seed: int = DEFAULT_SEED, bins: int = 32,
                         start: StartLike = None, threads: int = 1) -> MarkovReport:
    """
    Check E[f(x_{i+1}) | x_i] = R(f)(x_i) on simulated paths.

    bin_targets holds R(f) at each bin midpoint, for display next to the
    empirical bin means; the pass/fail decision uses the z-scores.
    """
    bins = require_positive_int(bins, "bins")
    sample = sample_path(family, start, steps, seed, n_paths, threads)
    here = sample.chains[:, :-1].reshape(-1)
    after = sample.chains[:, 1:].reshape(-1)
    operator = family.operator

    observed = np.asarray(f(after), dtype=float)
    predicted = operator.apply(f, here)
    variance = np.maximum(operator.apply(lambda y: np.asarray(f(y), dtype=float) ** 2, here) - predicted ** 2, 0.0)

    cells = cell_of(here, bins)
    counts = np.bincount(cells, minlength=bins)
    sums = np.bincount(cells, weights=observed, minlength=bins)
    deviations = np.bincount(cells, weights=observed - predicted, minlength=bins)
    variances = np.bincount(cells, weights=variance, minlength=bins)

    means = np.divide(sums, counts, out=np.full(bins, np.nan), where=counts > 0)
    z = np.zeros(bins)
    spread = variances > 1e-300
    z[spread] = deviations[spread] / np.sqrt(variances[spread])
    degenerate = ~spread & (np.abs(deviations) > 1e-9 * np.maximum(counts, 1))
    z[degenerate] = np.inf

    midpoints = (np.arange(bins) + 0.5) / bins
    report = MarkovReport(means, operator.apply(f, midpoints), z, counts)
    logger.info(f"markov test {family.label}: max |z| = {report.max_z:.3f}, {report.empty_bins} empty bin(s)")
    return report


@dataclass(frozen=True)
class StationarityReport:
    statistic: float
    pvalue: float
    threshold: float
    samples: int

    @property
    def passed(self) -> bool:
        return self.statistic <= self.threshold

    def to_check(self, name: str = "markov.stationarity") -> CheckResult:
        return CheckResult(name, self.passed, self.statistic,
                           f"KS statistic vs {self.threshold:.4f} on {self.samples} samples (p = {self.pvalue:.3f})")


def stationarity_test(family: RieszFamily, invariant: HistogramMeasure, steps: int = 20, n_paths: int = 20000,
                      seed: int = DEFAULT_SEED, threads: int = 1) -> StationarityReport:
    """
    Start from an invariant histogram and compare the time-`steps` marginal
    with it by Kolmogorov-Smirnov; the threshold is the 1% critical value
    1.63 / sqrt(N).
    """
    sample = sample_path(family, invariant, steps, seed, n_paths, threads)
    final = sample.chains[:, -1]
    reference = invariant.normalized()
    result = stats.kstest(final, reference.cdf)
    report = StationarityReport(float(result.statistic), float(result.pvalue), 1.63 / np.sqrt(final.size), final.size)
    logger.info(f"stationarity {family.label}: KS {report.statistic:.4f} (threshold {report.threshold:.4f})")
    return report
