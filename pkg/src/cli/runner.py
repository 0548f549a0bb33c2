"""
Argument parsing and the run loop: parse, validate, execute, write the manifest.

Exit codes: 0 success, 2 invalid input or failed precondition, 3 a numeric
contract failed (a check did not pass or an iteration did not converge).
"""
import argparse
from pathlib import Path
from typing import List, Optional, Sequence

from pydantic import ValidationError

from config.logging_config import cli_logger as logger
from src.core.checks import failed
from src.core.exceptions import NoConvergenceError, RuelleLabError
from src.utils.formatters import write_json
from src.utils.progress import set_progress
from .commands import COMMANDS, get_command
from .config import RunConfig, load_run_config

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_CONTRACT = 3

_HELP = {
    "invariant-density": "invariant histogram by power iteration, compared with the known closed form",
    "table1": "the four invariant-measure identities of the doubling map",
    "radon-nikodym": "derivative d(mu R)/dmu on the grid",
    "ifs-measure": "cylinder table, tree and histogram of an IFS measure",
    "chaos-game": "chaos-game samples of an IFS measure",
    "extract-pk": "branch probabilities recovered from a measure",
    "ifs-test": "decide whether a measure satisfies the IFS product rule",
    "moment-test": "moment condition for invariance under the extracted probabilities",
    "wold": "Wold decomposition of the Koopman isometry",
    "exactness": "norms of E_n f - mean f",
    "markov-sample": "backward Markov paths driven by the operator's kernels",
    "markov-test": "conditional-mean test of the Markov property",
    "couple-roundtrip": "coupling/operator round trips on random finite spaces",
    "uhs-demo": "universal Hilbert space algebra on atomic pairs",
    "verify-all": "the full property suite",
}


def _common_arguments() -> argparse.ArgumentParser:
    # SUPPRESS keeps unset flags out of the namespace so config-file values survive
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", dest="config_file", type=Path, help="key=value file merged under the flags")
    common.add_argument("--map", help="map label (doubling, tripling, twin_doubling, gauss, permutation)")
    common.add_argument("--k-max", "--kmax", dest="k_max", type=int, help="branches kept for the Gauss map")
    common.add_argument("--weight", help="weight label (half, uniform, cos2, pf, riesz, custom)")
    common.add_argument("--expression", help="weight expression in y for --weight custom")
    common.add_argument("--measure", help="closed-form measure label")
    common.add_argument("--action", choices=["pushforward", "operator"], help="matrix solved by invariant-density")
    common.add_argument("--function", help="test function in x")
    common.add_argument("--p", help="branch probabilities, comma separated")
    common.add_argument("--x0", type=float, help="start point of Markov paths")
    common.add_argument("--n", type=int, help="grid size")
    common.add_argument("--depth", type=int, help="cylinder or Wold depth")
    common.add_argument("--samples", type=int)
    common.add_argument("--burn-in", dest="burn_in", type=int)
    common.add_argument("--chains", type=int)
    common.add_argument("--paths", type=int)
    common.add_argument("--steps", type=int)
    common.add_argument("--bins", type=int)
    common.add_argument("--k-limit", dest="k_limit", type=int, help="branch cap for countable maps")
    common.add_argument("--m-max", dest="m_max", type=int)
    common.add_argument("--trials", type=int)
    common.add_argument("--tol", type=float)
    common.add_argument("--seed", type=int)
    common.add_argument("--threads", type=int, help="worker threads for path sampling")
    common.add_argument("--output", type=Path, help="artifact directory")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--progress", action="store_true", help="show progress bars on long loops")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ruelle-lab", description="Transfer operators on interval maps.")
    subparsers = parser.add_subparsers(dest="command", required=True)
    common = _common_arguments()
    for name in COMMANDS:
        subparsers.add_parser(name, parents=[common], help=_HELP.get(name))
    return parser


def _write_manifest(config: RunConfig, outputs: List[Path], checks) -> Path:
    return write_json(config.output / "manifest.json", {
        "config": config.model_dump(mode="json"),
        "outputs": [str(path) for path in outputs],
        "checks": [check.to_dict() for check in checks],
    })


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INVALID

    flags = vars(args)
    config_file = flags.pop("config_file", None)
    try:
        config = load_run_config(flags, config_file)
    except ValidationError as e:
        logger.error(f"invalid configuration: {e}")
        return EXIT_INVALID
    except OSError as e:
        logger.error(f"cannot read config file {config_file}: {e}")
        return EXIT_INVALID

    command = get_command(config.command)
    if command is None:
        return EXIT_INVALID
    logger.info(f"{config.command}: map={config.map} weight={config.weight} n={config.n} seed={config.seed}")
    set_progress(config.progress)
    try:
        result = command(config)
    except NoConvergenceError as e:
        logger.error(f"{config.command}: {e}")
        return EXIT_CONTRACT
    except RuelleLabError as e:
        logger.error(f"{config.command}: {e}")
        return EXIT_INVALID
    finally:
        set_progress(False)

    manifest = _write_manifest(config, result.outputs, result.checks)
    failures = failed(result.checks)
    for check in failures:
        logger.error(f"check {check.name} failed: residual {check.residual:.3e} ({check.detail})")
    logger.info(f"{config.command}: {len(result.checks) - len(failures)}/{len(result.checks)} checks passed, "
                f"manifest {manifest}")
    return EXIT_CONTRACT if failures else EXIT_OK
