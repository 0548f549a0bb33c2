"""
Reproducible sample points and random generators.

All randomness in ruelle-lab flows through counter-based Philox generators so a
seed reproduces the same stream on every platform.
"""
from typing import List

import numpy as np
from scipy.stats import qmc

from config.settings import DEFAULT_SEED


def make_rng(seed: int = DEFAULT_SEED) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def spawn_rngs(seed: int, count: int) -> List[np.random.Generator]:
    """Independent generators for `count` chunks, derived deterministically from one seed."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.Philox(child)) for child in children]


def quasi_random_points(count: int, seed: int = DEFAULT_SEED) -> np.ndarray:
    """Scrambled Halton points in (0, 1), used wherever a property is checked "on samples"."""
    sampler = qmc.Halton(d=1, scramble=True, seed=seed)
    return sampler.random(count)[:, 0]
