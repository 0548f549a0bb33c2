"""
Desk-scale property suite behind `verify-all`, one function per group.

Each group returns CheckResults; a group that raises is recorded as a single
failed check named after the group.
"""
from typing import Callable, Dict, List

import numpy as np

from config.logging_config import cli_logger as logger
from config.settings import ARITHMETIC_TOL, IDENTITY_TOL
from src.core.checks import CheckResult
from src.core.exceptions import RuelleLabError
from src.dynamics.factory import make_cell_permutation, make_doubling, make_gauss
from src.hilbert.couplings import (
    Coupling,
    composition_matrix,
    coupling_to_operator,
    deterministic_coupling,
    operator_to_coupling,
    product_coupling,
)
from src.hilbert.koopman import koopman_system
from src.hilbert.universal import HilbertPair, adjointness_residual, align, uhs_norm, uhs_R, uhs_S
from src.hilbert.wold import exactness_score, wold
from src.ifs.diagnostics import extract_pk, ifs_test
from src.ifs.integration import branch_masses
from src.markov.fibered import fibered_operator
from src.markov.parry import parry_jacobian
from src.markov.paths import markov_property_test, stationarity_test
from src.markov.riesz import riesz_family
from src.measures.action import act_on_measure
from src.measures.examples import filter_normalization_checks, riesz_invariance_residual, verify_table1
from src.measures.measures import AtomicMeasure, atomic_distance, discretize, gauss_mu0, lebesgue, linear
from src.measures.solvers import invariant_density
from src.measures.ulam import pushforward_matrix
from src.transferop.algebra import check_pullout, kernel_decompose
from src.transferop.base_operator import BaseTransferOperator
from src.transferop.weights import make_operator
from src.utils.progress import progress
from src.utils.sampling import make_rng, quasi_random_points


def coupling_checks(trials: int = 100, seed: int = 0) -> List[CheckResult]:
    """Round trips between couplings and row-stochastic operators on random finite spaces."""
    rng = make_rng(seed)
    to_operator, to_coupling, rank_one, composition = 0.0, 0.0, 0.0, 0.0
    for _ in range(trials):
        m = int(rng.integers(2, 9))
        joint = rng.random((m, m))
        nu = Coupling(joint)
        back = operator_to_coupling(coupling_to_operator(nu), nu.mu1)
        to_operator = max(to_operator, float(np.max(np.abs(back.joint - joint))))

        P = rng.random((m, m))
        P /= P.sum(axis=1, keepdims=True)
        mu1 = rng.random(m) + 0.1
        again = coupling_to_operator(operator_to_coupling(P, mu1))
        to_coupling = max(to_coupling, float(np.max(np.abs(again - P))))

        mu2 = rng.random(m) + 0.1
        rows = coupling_to_operator(product_coupling(mu1, mu2))
        rank_one = max(rank_one, float(np.max(np.abs(rows - mu2 / mu2.sum()))))

        sigma = rng.integers(0, m, size=m)
        S = coupling_to_operator(deterministic_coupling(sigma, mu1))
        composition = max(composition, float(np.max(np.abs(S - composition_matrix(sigma)))))
    return [
        CheckResult.from_residual("coupling.operator_roundtrip", to_operator, IDENTITY_TOL, f"{trials} instances"),
        CheckResult.from_residual("coupling.coupling_roundtrip", to_coupling, IDENTITY_TOL, f"{trials} instances"),
        CheckResult.from_residual("coupling.product_is_rank_one", rank_one, IDENTITY_TOL),
        CheckResult.from_residual("coupling.deterministic_is_composition", composition, IDENTITY_TOL),
    ]


def _random_pair(rng: np.random.Generator, size: int) -> HilbertPair:
    return HilbertPair(rng.random(size), rng.random(size) + 0.05, rng.standard_normal(size))


def uhs_checks(R: BaseTransferOperator, seed: int = 0, trials: int = 20) -> List[CheckResult]:
    """Universal-space algebra for a normalized R, plus the delta_{1/2} example under cos^2."""
    rng = make_rng(seed)
    isometry, inverse, adjoint = 0.0, 0.0, 0.0
    for _ in range(trials):
        a = _random_pair(rng, 4)
        Sa = uhs_S(R, a)
        isometry = max(isometry, abs(uhs_norm(Sa) - uhs_norm(a)))
        _, first, second = align(uhs_R(R, Sa), a)
        inverse = max(inverse, float(np.max(np.abs(first - second))))
        # b mixes atoms in the range of S^ with unrelated ones
        extra = _random_pair(rng, 3)
        b = uhs_S(R, _random_pair(rng, 2))
        b = HilbertPair(np.concatenate([b.locations, extra.locations]),
                        np.concatenate([b.masses, extra.masses]),
                        np.concatenate([b.values, extra.values]))
        adjoint = max(adjoint, adjointness_residual(R, a, b))

    cos2 = make_operator(make_doubling(), "cos2")
    pushed = AtomicMeasure.dirac(float(cos2.sigma(0.5)))
    delta_half = act_on_measure(cos2, pushed)
    return [
        CheckResult.from_residual("uhs.isometry", isometry, IDENTITY_TOL, R.label),
        CheckResult.from_residual("uhs.left_inverse", inverse, IDENTITY_TOL, R.label),
        CheckResult.from_residual("uhs.adjointness", adjoint, IDENTITY_TOL, R.label),
        CheckResult.from_residual("uhs.delta_half", atomic_distance(delta_half, AtomicMeasure.dirac(0.0)),
                                  IDENTITY_TOL, f"(delta_1/2 o sigma^-1) R' atoms {delta_half.atoms()}"),
    ]


def _operator_checks() -> List[CheckResult]:
    doubling = make_doubling()
    gauss = make_gauss(1000)
    operators = [make_operator(doubling, "half"), make_operator(doubling, "cos2"), make_operator(gauss, "pf")]
    checks = []
    rng = make_rng(11)
    for R in operators:
        worst = 0.0
        for _ in range(10):
            a, b, c = rng.standard_normal(3)
            f = lambda y, a=a, b=b: a * np.cos(2 * np.pi * y) + b * y ** 2
            g = lambda y, c=c: np.exp(c * y)
            worst = max(worst, check_pullout(R, f, g, samples=1000, seed=int(rng.integers(1 << 16))))
        checks.append(CheckResult.from_residual(f"operator.pullout[{R.label}]", worst,
                                                ARITHMETIC_TOL + R.tail_mass_bound, "10 x 1000 instances"))

    R = operators[0]
    x = quasi_random_points(1000, seed=2)
    worst = 0.0
    for j in range(1, 6):
        f = lambda y, j=j: np.sin(2 * np.pi * j * y) + y ** j
        f0, _ = kernel_decompose(R, f)
        worst = max(worst, float(np.max(np.abs(R.apply(f0, x)))))
        refined, _ = kernel_decompose(R, f0)
        worst = max(worst, float(np.max(np.abs(refined(x) - f0(x)))))
    checks.append(CheckResult.from_residual("operator.kernel_decomposition", worst, ARITHMETIC_TOL, R.label))
    return checks


def _measure_checks() -> List[CheckResult]:
    checks = verify_table1(2048) + filter_normalization_checks()
    checks.append(CheckResult.from_residual("measure.riesz_invariance", riesz_invariance_residual(3), 1e-10,
                                            "nu_3 R = nu_4 on trigonometric test functions"))

    gauss = make_gauss(10_000)
    n = 1024
    result = invariant_density(pushforward_matrix(gauss, n))
    reference = discretize(gauss_mu0(), n)
    deviation = float(np.max(np.abs(result.measure.density - reference.density)))
    checks.append(CheckResult.from_residual("measure.gauss_density", deviation, 0.01,
                                            f"n={n}, k_max=10000, vs 1/((1+x) ln 2) cell averages"))

    k = np.arange(1, 21)
    masses = branch_masses(gauss_mu0(), gauss, k_limit=20)
    expected = np.log1p(1.0 / (k * (k + 2))) / np.log(2.0)
    checks.append(CheckResult.from_residual("measure.gauss_branch_masses",
                                            float(np.max(np.abs(masses - expected))), 1e-10, "k <= 20"))
    return checks


def _ifs_checks() -> List[CheckResult]:
    verdict = ifs_test(make_gauss(1000), gauss_mu0(), depth=2)
    gap = verdict.gap if verdict.gap is not None else 0.0
    checks = [CheckResult(
        name="ifs.gauss_not_ifs",
        passed=bool(not verdict.is_ifs and verdict.witness == (1, 1) and gap > 0.01),
        residual=gap,
        detail=f"witness {verdict.witness}, mu = {verdict.measure_value}, product = {verdict.product_value}",
    )]
    estimate = extract_pk(make_doubling(), lebesgue(), 0)
    checks.append(CheckResult.from_residual(
        "ifs.doubling_pk", max(abs(estimate.ratio - 0.5), abs(estimate.branch_mass - 0.5)), 1e-10,
        f"ratio {estimate.ratio:.12f}, branch mass {estimate.branch_mass:.12f}",
    ))
    return checks


def _hilbert_checks() -> List[CheckResult]:
    doubling = make_doubling()
    K = koopman_system(doubling, lebesgue(), 12)
    step = exactness_score(K, lambda x: (np.asarray(x) < 0.5).astype(float), 12)
    wave = exactness_score(K, lambda x: np.cos(2 * np.pi * np.asarray(x)), 1)
    small = koopman_system(doubling, lebesgue(), 6)
    decomposition = wold(small, 6)

    control = koopman_system(make_cell_permutation(8), lebesgue(), 3)
    flat = exactness_score(control, lambda x: np.asarray(x, dtype=float), 3)
    checks = [
        CheckResult("hilbert.exactness_indicator", bool(step.monotone and step.norms[-1] < 1e-3),
                    float(step.norms[-1]), f"norms {np.array2string(step.norms, precision=3)}"),
        CheckResult.from_residual("hilbert.E1_cos", float(wave.norms[1]), 1e-8, "||E_1 cos(2 pi x)||"),
        CheckResult.from_residual("hilbert.invertible_constant_scores",
                                  float(np.max(np.abs(flat.norms - flat.norms[0]))), 1e-12, control.branch_map.label),
        CheckResult("hilbert.wold_doubling", bool(decomposition.passed() and decomposition.h_inf_dim == 1),
                    float(max(decomposition.idempotence_residual, decomposition.orthogonality_residual)),
                    f"dim H_inf = {decomposition.h_inf_dim}"),
    ]
    return checks + coupling_checks() + uhs_checks(make_operator(doubling, "half"))


def _markov_checks() -> List[CheckResult]:
    doubling = make_doubling()
    family = riesz_family(make_operator(doubling, "half"))
    report = markov_property_test(family, lambda y: np.asarray(y, dtype=float), n_paths=100_000, steps=20, seed=1)
    stationarity = stationarity_test(family, discretize(lebesgue(), 64), steps=20, n_paths=100_000, seed=2)

    rng = make_rng(5)
    labels = rng.permutation(np.arange(64) % 8)
    fibered = fibered_operator(labels, weights=rng.random(64) + 0.5)
    h = rng.standard_normal(8)[labels]
    probe = rng.standard_normal(64)

    jacobian = parry_jacobian(doubling, discretize(linear(), 1024))
    gauss_jacobian = parry_jacobian(make_gauss(1000), discretize(gauss_mu0(), 1024))
    return [
        report.to_check(),
        stationarity.to_check(),
        CheckResult.from_residual("markov.fibered_harmonic", fibered.harmonic_residual(h), IDENTITY_TOL),
        CheckResult("markov.fibered_probe_not_fixed", bool(fibered.harmonic_residual(probe) > 1e-3),
                    fibered.harmonic_residual(probe), "non-fiber-constant probe"),
        CheckResult.from_residual("markov.fibered_derivative", fibered.derivative_residual(), IDENTITY_TOL),
        CheckResult.from_residual("markov.riesz_pushforward", family.pushforward_residual(), IDENTITY_TOL),
        jacobian.identity_check(5.0 / 1024),
        gauss_jacobian.identity_check(0.01),
    ]


GROUPS: Dict[str, Callable[[], List[CheckResult]]] = {
    "operators": _operator_checks,
    "measures": _measure_checks,
    "ifs": _ifs_checks,
    "hilbert": _hilbert_checks,
    "markov": _markov_checks,
}


def run_all() -> List[CheckResult]:
    checks: List[CheckResult] = []
    for name in progress(GROUPS, "verify-all"):
        try:
            group = GROUPS[name]()
        except RuelleLabError as e:
            logger.error(f"group {name} failed: {e}")
            group = [CheckResult(f"{name}.error", False, float("nan"), str(e))]
        passed = sum(check.passed for check in group)
        logger.info(f"{name}: {passed}/{len(group)} checks passed")
        checks.extend(group)
    return checks
