"""
Concrete transfer operators: weighted sums over preimages and the operators
built from them (products, linear combinations, Doob transforms, conjugates,
restrictions).
"""
from typing import Callable, Optional, Tuple

import numpy as np

from src.core.exceptions import InvalidArgumentError
from src.dynamics.branch_map import BranchMap
from src.utils.sampling import quasi_random_points
from .base_operator import BaseTransferOperator, GridFn

WeightFn = Callable[[np.ndarray], np.ndarray]


class WeightedTransferOperator(BaseTransferOperator):
    """R f(x) = sum_k W(tau_k x) f(tau_k x) for a BranchMap and a weight on preimage points."""

    def __init__(self, branch_map: BranchMap, weight: WeightFn, weight_label: str = "custom"):
        self.branch_map = branch_map
        self.weight = weight
        self.weight_label = weight_label
        self.label = f"{branch_map.label}/{weight_label}"
        self.tail_mass_bound = branch_map.tail_mass_bound

    def kernel(self, x) -> Tuple[np.ndarray, np.ndarray]:
        points, valid = self.branch_map.preimages(x)
        weights = np.where(valid, np.asarray(self.weight(points), dtype=float) + np.zeros(points.shape), 0.0)
        return points, weights

    def sigma(self, y):
        return self.branch_map.sigma(y)


class ComposedTransferOperator(BaseTransferOperator):
    """The product R1 R2, a transfer operator for sigma1 o sigma2."""

    def __init__(self, first: BaseTransferOperator, second: BaseTransferOperator):
        self.first = first
        self.second = second
        self.label = f"({first.label})({second.label})"
        self.tail_mass_bound = first.tail_mass_bound + second.tail_mass_bound

    def kernel(self, x) -> Tuple[np.ndarray, np.ndarray]:
        p1, w1 = self.first.kernel(x)
        k1, m = p1.shape
        p2, w2 = self.second.kernel(p1.reshape(-1))
        k2 = p2.shape[0]
        points = p2.reshape(k2, k1, m).reshape(k2 * k1, m)
        weights = (w2.reshape(k2, k1, m) * w1[None, :, :]).reshape(k2 * k1, m)
        return points, weights

    def sigma(self, y):
        return self.first.sigma(self.second.sigma(y))


class CombinedTransferOperator(BaseTransferOperator):
    """a R1 + b R2 for two operators sharing sigma."""

    def __init__(self, a: float, first: BaseTransferOperator, b: float, second: BaseTransferOperator,
                 samples: int = 256):
        if a < 0 or b < 0:
            raise InvalidArgumentError("coefficients of a positive combination must be nonnegative")
        y = quasi_random_points(samples, seed=7)
        gap = float(np.max(np.abs(np.asarray(first.sigma(y)) - np.asarray(second.sigma(y)))))
        if gap > 1e-12:
            raise InvalidArgumentError(f"operators act over different maps (sigma gap {gap:.3e})")
        self.a, self.first, self.b, self.second = float(a), first, float(b), second
        self.label = f"{a:g}*{first.label}+{b:g}*{second.label}"
        self.tail_mass_bound = a * first.tail_mass_bound + b * second.tail_mass_bound

    def kernel(self, x) -> Tuple[np.ndarray, np.ndarray]:
        p1, w1 = self.first.kernel(x)
        p2, w2 = self.second.kernel(x)
        return np.vstack([p1, p2]), np.vstack([self.a * w1, self.b * w2])

    def sigma(self, y):
        return self.first.sigma(y)


class DoobTransferOperator(BaseTransferOperator):
    """R_k(f) = R(f k) / k for an operator known only through its kernel."""

    def __init__(self, base: BaseTransferOperator, k: GridFn, k_label: str = "k"):
        self.base = base
        self.k = k
        self.label = f"{base.label}|doob({k_label})"
        self.tail_mass_bound = base.tail_mass_bound

    def kernel(self, x) -> Tuple[np.ndarray, np.ndarray]:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        points, weights = self.base.kernel(x)
        ratio = np.asarray(self.k(points), dtype=float) / np.asarray(self.k(x), dtype=float)[None, :]
        return points, np.where(weights != 0.0, weights * ratio, 0.0)

    def sigma(self, y):
        return self.base.sigma(y)


class ConjugateTransferOperator(BaseTransferOperator):
    """
    R'(f) = R(f o T) o T^{-1}, the transfer operator for sigma' = T sigma T^{-1}.

    When `target` is given it is used as sigma' (after the caller has checked
    the intertwining); otherwise sigma' is computed as T o sigma o T^{-1}.
    """

    def __init__(self, base: BaseTransferOperator, T: GridFn, T_inv: GridFn,
                 target: Optional[BranchMap] = None, label: str = "T"):
        self.base = base
        self.T = T
        self.T_inv = T_inv
        self.target = target
        self.label = f"{label}.{base.label}"
        self.tail_mass_bound = base.tail_mass_bound

    def kernel(self, x) -> Tuple[np.ndarray, np.ndarray]:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        points, weights = self.base.kernel(self.T_inv(x))
        return self.T(points), weights

    def sigma(self, y):
        if self.target is not None:
            return self.target.sigma(y)
        return self.T(np.asarray(self.base.sigma(self.T_inv(np.asarray(y, dtype=float)))))


class RestrictedTransferOperator(BaseTransferOperator):
    """
    R_A(f) = R(chi_A f) for a sigma-invariant set A given by its indicator.

    When A is a union of grid cells, `cells` and `n` record it at resolution n.
    """

    def __init__(self, base: BaseTransferOperator, indicator: GridFn, label: str = "A",
                 cells: Optional[np.ndarray] = None, n: Optional[int] = None):
        self.base = base
        self.indicator = indicator
        self.label = f"{base.label}|{label}"
        self.tail_mass_bound = base.tail_mass_bound
        self.branch_map: Optional[BranchMap] = getattr(base, "branch_map", None)
        self.cells = None if cells is None else np.asarray(cells, dtype=np.int64)
        self.n = n

    def kernel(self, x) -> Tuple[np.ndarray, np.ndarray]:
        points, weights = self.base.kernel(x)
        return points, weights * np.asarray(self.indicator(points), dtype=float)

    def sigma(self, y):
        return self.base.sigma(y)
