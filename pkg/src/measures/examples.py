"""
Worked examples with known answers: the invariant-measure table of the
doubling map under the 1/2 and cos^2 weights, and Riesz partial products.
"""
from typing import List

import numpy as np

from config.logging_config import measure_logger as logger
from src.core.checks import CheckResult
from src.core.exceptions import AbsoluteContinuityError
from src.dynamics.factory import make_doubling, make_tripling
from src.transferop.weights import make_operator
from src.utils.grid import cell_edges
from src.utils.validators import require_positive_int
from .action import act_on_measure, is_absolutely_continuous, radon_nikodym
from .measures import AtomicMeasure, HistogramMeasure, atomic_distance


def verify_table1(n: int = 2048) -> List[CheckResult]:
    """
    Check the four invariant-measure identities of the doubling map.

    R uses W = 1/2, R' uses W(y) = cos^2(pi y); mu is Lebesgue measure.

        mu R = mu
        delta_0 R = (delta_0 + delta_{1/2}) / 2, not absolutely continuous w.r.t. delta_0
        d(mu R') = 2 cos^2(pi x) dx
        delta_0 R' = delta_0

    Histogram cells run at resolution n, atomic cells are exact.
    """
    n = require_positive_int(n, "n", minimum=2)
    doubling = make_doubling()
    R = make_operator(doubling, "half")
    R_prime = make_operator(doubling, "cos2")
    lebesgue = HistogramMeasure(np.full(n, 1.0 / n))
    delta0 = AtomicMeasure.dirac(0.0)
    checks = []

    image = act_on_measure(R, lebesgue)
    checks.append(CheckResult.from_residual(
        "table1.lebesgue_R", float(np.abs(image.masses - lebesgue.masses).sum()), 1e-9,
        f"L1 distance at n={n}",
    ))

    image = act_on_measure(R, delta0)
    expected = AtomicMeasure([0.0, 0.5], [0.5, 0.5])
    distance = atomic_distance(image, expected)
    continuous = is_absolutely_continuous(image, delta0)
    checks.append(CheckResult(
        name="table1.delta0_R",
        passed=bool(distance <= 1e-12 and not continuous),
        residual=distance,
        detail=f"atoms {image.atoms()}; absolutely continuous w.r.t. delta_0: {continuous}",
    ))

    try:
        derivative = radon_nikodym(R_prime, lebesgue)
    except AbsoluteContinuityError as e:
        checks.append(CheckResult("table1.lebesgue_R_prime", False, float("inf"), detail=str(e)))
    else:
        edges = cell_edges(n)
        # exact cell averages of 2 cos^2(pi x) = 1 + cos(2 pi x)
        exact = 1.0 + n * (np.sin(2 * np.pi * edges[1:]) - np.sin(2 * np.pi * edges[:-1])) / (2 * np.pi)
        residual = float(np.max(np.abs(derivative.values - exact)))
        midpoint_error = float(np.max(np.abs(derivative.values - 2 * np.cos(np.pi * derivative.midpoints) ** 2)))
        checks.append(CheckResult.from_residual(
            "table1.lebesgue_R_prime", residual, 1e-9,
            f"derivative vs 2cos^2 cell averages; midpoint sup error {midpoint_error:.3e} (bound {5.0 / n:.3e})",
        ))

    image = act_on_measure(R_prime, delta0)
    checks.append(CheckResult.from_residual(
        "table1.delta0_R_prime", atomic_distance(image, delta0), 1e-12, f"atoms {image.atoms()}",
    ))

    for check in checks:
        logger.info(f"{check.name}: {'pass' if check.passed else 'FAIL'} (residual {check.residual:.3e})")
    return checks


def riesz_partial_density(n: int, t, start: int = 1):
    """(2 pi)^{-1} prod_{k=start}^{n} (1 + cos(2 3^k t)) for t in [0, 2 pi)."""
    t = np.asarray(t, dtype=float)
    value = np.full(t.shape, 1.0 / (2.0 * np.pi))
    for k in range(start, n + 1):
        value = value * (1.0 + np.cos(2.0 * 3 ** k * t))
    return float(value) if value.ndim == 0 else value


def riesz_partial_mass(n: int, start: int = 1) -> float:
    """
    int_0^{2 pi} of the partial density.

    The density is a trigonometric polynomial of degree below 3^{n+1}, so the
    periodic trapezoid rule on 2 3^{n+1} points is exact up to rounding.
    """
    points = 2 * 3 ** (n + 1)
    t = 2.0 * np.pi * np.arange(points) / points
    return float(2.0 * np.pi * np.mean(riesz_partial_density(n, t, start)))


def _tripling_product(n: int, x: np.ndarray) -> np.ndarray:
    value = np.ones(x.shape)
    for k in range(0, n + 1):
        value = value * (1.0 + np.cos(4.0 * np.pi * 3 ** k * x))
    return value


def riesz_invariance_residual(n: int, modes: int = 6) -> float:
    """
    max over trigonometric test functions f of |int R(f) dnu_n - int f dnu_{n+1}|.

    R is the tripling operator with weight (1 + cos 4 pi y)/3 and nu_n has
    density prod_{k=0}^{n} (1 + cos(4 pi 3^k x)); the identity nu_n R = nu_{n+1}
    holds exactly.
    """
    R = make_operator(make_tripling(), "riesz")
    points = 2 * (3 ** (n + 2) + modes) + 1
    x = np.arange(points) / points
    g_n = _tripling_product(n, x)
    g_next = _tripling_product(n + 1, x)
    worst = 0.0
    for j in range(1, modes + 1):
        for f in (lambda y, j=j: np.cos(2 * np.pi * j * y), lambda y, j=j: np.sin(2 * np.pi * j * y)):
            lhs = np.mean(R.apply(f, x) * g_n)
            rhs = np.mean(f(x) * g_next)
            worst = max(worst, abs(lhs - rhs))
    return float(worst)


def filter_normalization_checks() -> List[CheckResult]:
    """
    Where the point mass at 0 goes under the two readings of the filter
    m(w) = (1 + w^2)/sqrt(2).

    With |m|^2 / 2 = cos^2 on the doubling map delta_0 is fixed. On the
    tripling map with |m|^2 / 3 it is not: delta_0 R = 2/3 delta_0 + 1/6 (delta_{1/3} + delta_{2/3}).
    """
    delta0 = AtomicMeasure.dirac(0.0)
    doubling_image = act_on_measure(make_operator(make_doubling(), "cos2"), delta0)
    tripling_image = act_on_measure(make_operator(make_tripling(), "riesz"), delta0)
    expected = AtomicMeasure([0.0, 1.0 / 3.0, 2.0 / 3.0], [2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0])
    return [
        CheckResult.from_residual("filter.doubling_fixes_delta0", atomic_distance(doubling_image, delta0), 1e-12,
                                  f"atoms {doubling_image.atoms()}"),
        CheckResult.from_residual("filter.tripling_moves_delta0", atomic_distance(tripling_image, expected), 1e-12,
                                  f"atoms {tripling_image.atoms()}"),
    ]
