"""
Subcommands of the ruelle-lab command line.

Each command takes a validated RunConfig, writes its artifacts under
config.output and returns the written paths together with the numeric
contracts it checked.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import pandas as pd

from config.logging_config import cli_logger as logger
from config.settings import ARITHMETIC_TOL, HARMONIC_TOL, IDENTITY_TOL
from src.core.checks import CheckResult
from src.core.exceptions import InvalidArgumentError
from src.dynamics.branch_map import BranchMap
from src.dynamics.factory import get_map
from src.hilbert.koopman import KoopmanSystem, koopman_system
from src.hilbert.wold import exactness_score, wold
from src.ifs.chaos_game import chaos_game
from src.ifs.cylinders import ifs_measure_cylinders
from src.ifs.diagnostics import extract_all_pk, ifs_test, moment_invariance_test
from src.ifs.integration import branch_masses
from src.ifs.probability import ProbabilityVector, gauss_branch_masses
from src.markov.paths import markov_property_test, sample_path
from src.markov.riesz import riesz_family
from src.measures.action import derivative_pairing_residual, radon_nikodym
from src.measures.base_measure import BaseMeasure
from src.measures.examples import verify_table1
from src.measures.measures import HistogramMeasure, discretize, get_measure
from src.measures.solvers import invariant_density
from src.measures.ulam import pushforward_matrix, ulam_matrix
from src.transferop.algebra import require_normalized
from src.transferop.base_operator import BaseTransferOperator
from src.transferop.weights import make_operator
from src.utils.expressions import parse_function
from src.utils.formatters import write_csv, write_json
from src.utils.grid import cell_midpoints
from .config import RunConfig
from .verification import coupling_checks, run_all, uhs_checks

# sigma-invariant densities with a closed form, compared against in invariant-density
REFERENCE_DENSITIES = {"gauss": "mu0", "doubling": "lebesgue", "tripling": "lebesgue"}

_TREE_DEPTH = 4
_DEFAULT_EXACTNESS_FUNCTION = "Piecewise((1, x < 1/2), (0, True))"


@dataclass
class CommandResult:
    outputs: List[Path] = field(default_factory=list)
    checks: List[CheckResult] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)


def _branch_map(config: RunConfig) -> BranchMap:
    params: Dict[str, Any] = {}
    if config.map == "gauss":
        params["k_max"] = config.k_max
    elif config.map == "permutation":
        params["n"] = config.n
    branch_map = get_map(config.map, **params)
    if branch_map is None:
        raise InvalidArgumentError(f"unknown map {config.map!r}")
    return branch_map


def _measure(config: RunConfig) -> BaseMeasure:
    params = {"n": config.depth} if config.measure.startswith("riesz") else {}
    measure = get_measure(config.measure, **params)
    if measure is None:
        raise InvalidArgumentError(f"unknown measure {config.measure!r}")
    return measure


def _operator(config: RunConfig, branch_map: BranchMap) -> BaseTransferOperator:
    return make_operator(branch_map, config.weight, config.expression)


def _probabilities(config: RunConfig, branch_map: BranchMap) -> ProbabilityVector:
    if config.p:
        return ProbabilityVector.from_values(config.p)
    if branch_map.is_countable:
        return gauss_branch_masses(branch_map.k_max)
    return ProbabilityVector.uniform(branch_map.branch_count)


def _k_limit(config: RunConfig, branch_map: BranchMap) -> int:
    return config.k_limit if branch_map.is_countable else 0


def _write_table(config: RunConfig, stem: str, frame: pd.DataFrame, extra: Optional[Dict[str, Any]] = None) -> Path:
    if config.format == "csv":
        return write_csv(config.output / f"{stem}.csv", frame)
    payload = dict(extra or {})
    payload["rows"] = frame.to_dict(orient="records")
    return write_json(config.output / f"{stem}.json", payload)


def _histogram_frame(histogram: HistogramMeasure) -> pd.DataFrame:
    return pd.DataFrame({
        "cell": np.arange(histogram.n),
        "x": cell_midpoints(histogram.n),
        "mass": histogram.masses,
        "density": histogram.density,
    })


def invariant_density_command(config: RunConfig) -> CommandResult:
    """Fixed point of the pushforward (sigma-invariant) or of the dual action of R."""
    branch_map = _branch_map(config)
    if config.action == "pushforward":
        matrix = pushforward_matrix(branch_map, config.n)
    else:
        matrix = ulam_matrix(_operator(config, branch_map), config.n)
    result = invariant_density(matrix, tol=min(config.tol, ARITHMETIC_TOL))
    frame = _histogram_frame(result.measure)
    checks = [CheckResult.from_residual("invariant_density.residual", result.residual, min(config.tol, ARITHMETIC_TOL),
                                        f"{result.iterations} iterations")]

    reference_label = REFERENCE_DENSITIES.get(config.map) if config.action == "pushforward" else None
    if reference_label is not None:
        reference = discretize(get_measure(reference_label), config.n).density
        frame["reference"] = reference
        frame["deviation"] = np.abs(frame["density"].to_numpy() - reference)
        checks.append(CheckResult.from_residual(
            "invariant_density.reference", float(frame["deviation"].max()), 0.01,
            f"vs {reference_label} cell averages",
        ))
    summary = {
        "iterations": result.iterations,
        "unique": result.unique,
        "spectral_gap": result.spectral_gap,
        "matrix": matrix.kind,
    }
    output = _write_table(config, "density", frame, summary)
    return CommandResult([output], checks, summary)


def table1_command(config: RunConfig) -> CommandResult:
    checks = verify_table1(config.n)
    output = write_json(config.output / "table1.json", {"n": config.n, "checks": [c.to_dict() for c in checks]})
    return CommandResult([output], checks)


def radon_nikodym_command(config: RunConfig) -> CommandResult:
    """W = d(mu R)/dmu on the grid, with the pairing identity int R(f) dmu = int f W dmu."""
    branch_map = _branch_map(config)
    R = _operator(config, branch_map)
    mu = discretize(_measure(config), config.n)
    matrix = ulam_matrix(R, config.n)
    derivative = radon_nikodym(R, mu, matrix)
    residual = derivative_pairing_residual(R, mu, derivative, lambda x: np.cos(2 * np.pi * x), matrix)
    frame = pd.DataFrame({"cell": np.arange(mu.n), "x": derivative.midpoints, "derivative": derivative.values})
    output = _write_table(config, "radon_nikodym", frame, {"operator": R.label})
    return CommandResult([output], [CheckResult.from_residual("radon_nikodym.pairing", residual, ARITHMETIC_TOL)])


def ifs_measure_command(config: RunConfig) -> CommandResult:
    """Cylinder table of the IFS measure of p, its tree and induced histogram."""
    branch_map = _branch_map(config)
    pvec = _probabilities(config, branch_map)
    table = ifs_measure_cylinders(branch_map, pvec, config.depth)
    tree = table.write_tree(config.output / "cylinders.json", max_depth=min(config.depth, _TREE_DEPTH))
    histogram = _write_table(config, "ifs_histogram", _histogram_frame(table.histogram(config.n)))
    checks = [
        table.invariance_check(config.n),
        CheckResult.from_residual("ifs.kolmogorov", table.kolmogorov_residual(), ARITHMETIC_TOL + pvec.tail_mass),
    ]
    return CommandResult([tree, histogram], checks, {"cylinders": table.size})


def chaos_game_command(config: RunConfig) -> CommandResult:
    """Chaos-game samples of the IFS measure; branch masses must sit in the 4-sigma band around p."""
    branch_map = _branch_map(config)
    pvec = _probabilities(config, branch_map)
    cloud = chaos_game(branch_map, pvec, config.samples, config.burn_in, config.seed, config.chains)
    samples = cloud.write(config.output / "samples.bin")
    histogram = _write_table(config, "chaos_histogram", _histogram_frame(cloud.histogram(config.n)))

    shown = min(pvec.size, config.k_limit) if branch_map.is_countable else pvec.size
    observed = branch_masses(cloud, branch_map, k_limit=shown)
    expected = pvec.p[:shown]
    bands = np.array([cloud.clt_band(m) for m in expected])
    deviation = np.abs(observed - expected)
    worst = int(np.argmax(deviation - bands))
    check = CheckResult(
        name="chaos_game.branch_masses",
        passed=bool(np.all(deviation <= bands)),
        residual=float(deviation.max()),
        detail=f"largest excess at branch position {worst}: {deviation[worst]:.3e} vs band {bands[worst]:.3e}",
    )
    return CommandResult([samples, histogram], [check], {"count": cloud.count})


def extract_pk_command(config: RunConfig) -> CommandResult:
    branch_map = _branch_map(config)
    estimates = extract_all_pk(branch_map, _measure(config), k_limit=_k_limit(config, branch_map) or None)
    frame = pd.DataFrame([estimate.to_dict() for estimate in estimates])
    output = _write_table(config, "pk", frame, {"map": branch_map.label, "measure": config.measure})
    return CommandResult([output], [], {"branches": len(estimates)})


def ifs_test_command(config: RunConfig) -> CommandResult:
    """The verdict is the result; NOT_IFS is a successful run."""
    branch_map = _branch_map(config)
    verdict = ifs_test(branch_map, _measure(config), config.depth, config.k_limit, config.tol)
    payload = verdict.to_dict()
    payload["gap"] = verdict.gap
    output = write_json(config.output / "ifs_test.json", payload)
    return CommandResult([output], [], {"verdict": payload["verdict"], "witness": payload["witness"]})


def moment_test_command(config: RunConfig) -> CommandResult:
    branch_map = _branch_map(config)
    p = ProbabilityVector.from_values(config.p) if config.p else None
    report = moment_invariance_test(branch_map, _measure(config), p, config.m_max, config.k_limit, config.tol)
    output = write_json(config.output / "moment_test.json", report.to_dict())
    return CommandResult([output], [], {"passed": report.passed, "max_violation": report.max_violation})


def _koopman(config: RunConfig) -> KoopmanSystem:
    branch_map = _branch_map(config)
    return koopman_system(branch_map, _measure(config), config.depth, _k_limit(config, branch_map))


def wold_command(config: RunConfig) -> CommandResult:
    decomposition = wold(_koopman(config), config.depth)
    residual = max(decomposition.idempotence_residual, decomposition.decreasing_residual,
                   decomposition.orthogonality_residual, decomposition.h_inf_residual)
    summary = {
        "h_inf_dim": decomposition.h_inf_dim,
        "layer_dims": decomposition.layer_dims,
        "idempotence_residual": decomposition.idempotence_residual,
        "decreasing_residual": decomposition.decreasing_residual,
        "orthogonality_residual": decomposition.orthogonality_residual,
        "h_inf_residual": decomposition.h_inf_residual,
    }
    output = write_json(config.output / "wold.json", summary)
    return CommandResult([output], [CheckResult.from_residual("wold.projections", residual, HARMONIC_TOL)], summary)


def exactness_command(config: RunConfig) -> CommandResult:
    """||E_n f - mean f|| for n = 0..depth; a plateau flags a nontrivial tail."""
    K = _koopman(config)
    f = parse_function(config.function or _DEFAULT_EXACTNESS_FUNCTION, "x")
    score = exactness_score(K, f, config.depth)
    increase = float(np.max(np.diff(score.norms), initial=0.0))
    check = CheckResult("exactness.monotone", score.monotone, max(increase, 0.0),
                        f"final norm {score.norms[-1]:.3e}, plateau {score.plateau}")
    output = _write_table(config, "exactness", score.to_frame(), {"mean": score.mean})
    return CommandResult([output], [check], {"plateau": score.plateau, "final_norm": float(score.norms[-1])})


def markov_sample_command(config: RunConfig) -> CommandResult:
    branch_map = _branch_map(config)
    R = _operator(config, branch_map)
    require_normalized(R)
    sample = sample_path(riesz_family(R), config.x0, config.steps, config.seed, config.paths, config.threads)
    output = _write_table(config, "paths", sample.to_frame(), sample.manifest())
    manifest = write_json(config.output / "paths_manifest.json", sample.manifest())
    tol = IDENTITY_TOL * (1.0 + (branch_map.k_max or 0))
    check = CheckResult.from_residual("markov.solenoid_relation", sample.relation_residual(branch_map.sigma), tol,
                                      f"{sample.n_paths} paths x {sample.steps} steps")
    return CommandResult([output, manifest], [check], {"tail_resamples": sample.tail_resamples})


def markov_test_command(config: RunConfig) -> CommandResult:
    branch_map = _branch_map(config)
    R = _operator(config, branch_map)
    require_normalized(R)
    f = parse_function(config.function or "x", "x")
    report = markov_property_test(riesz_family(R), f, config.paths, config.steps, config.seed, config.bins,
                                  config.x0, config.threads)
    output = _write_table(config, "markov_test", report.to_frame(), {"max_z": report.max_z})
    return CommandResult([output], [report.to_check()], {"empty_bins": report.empty_bins})


def couple_roundtrip_command(config: RunConfig) -> CommandResult:
    checks = coupling_checks(config.trials, config.seed)
    output = write_json(config.output / "couplings.json", {"checks": [c.to_dict() for c in checks]})
    return CommandResult([output], checks)


def uhs_demo_command(config: RunConfig) -> CommandResult:
    R = _operator(config, _branch_map(config))
    checks = uhs_checks(R, config.seed)
    output = write_json(config.output / "uhs.json", {"operator": R.label, "checks": [c.to_dict() for c in checks]})
    return CommandResult([output], checks)


def verify_all_command(config: RunConfig) -> CommandResult:
    checks = run_all()
    output = write_json(config.output / "verify_all.json", {"checks": [c.to_dict() for c in checks]})
    return CommandResult([output], checks, {"checks": len(checks)})


# Registry of available commands
COMMANDS: Dict[str, Callable[[RunConfig], CommandResult]] = {
    "invariant-density": invariant_density_command,
    "table1": table1_command,
    "radon-nikodym": radon_nikodym_command,
    "ifs-measure": ifs_measure_command,
    "chaos-game": chaos_game_command,
    "extract-pk": extract_pk_command,
    "ifs-test": ifs_test_command,
    "moment-test": moment_test_command,
    "wold": wold_command,
    "exactness": exactness_command,
    "markov-sample": markov_sample_command,
    "markov-test": markov_test_command,
    "couple-roundtrip": couple_roundtrip_command,
    "uhs-demo": uhs_demo_command,
    "verify-all": verify_all_command,
}


def get_command(label: str) -> Optional[Callable[[RunConfig], CommandResult]]:
    """
    Get the command function for a subcommand name.

    Returns:
        The command, or None if the name is not supported
    """
    command = COMMANDS.get(label.lower())
    if not command:
        logger.error(f"Command '{label}' not supported.")
        logger.info(f"Available commands: {', '.join(COMMANDS.keys())}")
        return None
    return command
