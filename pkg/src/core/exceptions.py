"""
Typed errors raised by ruelle-lab operations.

Every error is a ValueError so callers that only care about "bad input"
can catch one thing; the CLI maps these to exit code 2, except
NoConvergenceError, which is a numeric-contract failure (exit code 3).
"""
from typing import Iterable, List, Optional, Sequence


class RuelleLabError(ValueError):
    """Base class for all ruelle-lab errors."""


class InvalidArgumentError(RuelleLabError):
    """A parameter is outside its documented domain."""


class TailEscapeError(RuelleLabError):
    """An iterate fell into the uncovered tail of a truncated countable map."""

    def __init__(self, step: Optional[int], point: float, message: str = ""):
        self.step = step
        self.point = point
        where = f" at step {step}" if step is not None else ""
        super().__init__(message or f"point {point!r} escaped into the truncated tail{where}")


class HistoryExhaustedError(RuelleLabError):
    """A solenoid point has no recorded history left to drop."""


class InvalidWordError(RuelleLabError):
    """A symbol word uses unknown branch labels or is not admissible."""


class NormalizationRequiredError(RuelleLabError):
    """The operation needs R(1) = 1; apply doob with a harmonic function first."""

    def __init__(self, residual: float):
        self.residual = residual
        super().__init__(
            f"operator is not normalized (max |R(1) - 1| = {residual:.3e}); "
            "use doob(R, h) with a harmonic h first"
        )


class NotHarmonicError(RuelleLabError):
    """A function supplied as harmonic does not satisfy R(h) = h."""

    def __init__(self, residual: float):
        self.residual = residual
        super().__init__(f"function is not harmonic (max |R(h) - h| = {residual:.3e})")


class NotConjugateError(RuelleLabError):
    """The intertwining relation T o sigma = sigma' o T fails."""

    def __init__(self, deviation: float):
        self.deviation = deviation
        super().__init__(f"maps are not conjugate (max deviation {deviation:.3e})")


class InvariantSetViolationError(RuelleLabError):
    """A cell set is not sigma-invariant at grid resolution."""

    def __init__(self, cells: Sequence[int]):
        self.cells: List[int] = [int(c) for c in cells]
        preview = ", ".join(str(c) for c in self.cells[:20])
        more = "..." if len(self.cells) > 20 else ""
        super().__init__(f"cell set is not invariant; offending cells: [{preview}{more}]")


class MustDiscretizeError(RuelleLabError):
    """A closed-form measure has no exact pushforward rule; discretize it first."""


class AbsoluteContinuityError(RuelleLabError):
    """A measure charges cells where the reference measure has no mass."""

    def __init__(self, cells: Iterable[int], message: str = ""):
        self.cells: List[int] = [int(c) for c in cells]
        preview = ", ".join(str(c) for c in self.cells[:20])
        more = "..." if len(self.cells) > 20 else ""
        super().__init__(message or f"absolute continuity fails on cells [{preview}{more}]")


class NoConvergenceError(RuelleLabError):
    """An iterative solver stopped at max_iter above tolerance."""

    def __init__(self, residual: float, iterations: int):
        self.residual = residual
        self.iterations = iterations
        super().__init__(
            f"no convergence after {iterations} iterations (last residual {residual:.3e})"
        )


class SizeLimitError(RuelleLabError):
    """A requested table would exceed the configured size limit."""


class DegenerateMeasureError(RuelleLabError):
    """A measure has a vanishing moment where a positive one is required."""


class NotInvariantError(RuelleLabError):
    """A measure supplied as sigma-invariant is not."""

    def __init__(self, residual: float):
        self.residual = residual
        super().__init__(f"measure is not sigma-invariant (residual {residual:.3e})")


class InconsistentCertificateError(RuelleLabError):
    """A caller-supplied K1 certificate disagrees with recomputation."""


class InvalidCouplingError(RuelleLabError):
    """A joint measure or stochastic matrix violates its marginal contract."""


class InvalidPartitionError(RuelleLabError):
    """A fiber partition has empty fibers or does not cover the grid."""
