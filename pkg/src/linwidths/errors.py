"""Exception types shared across the package."""


class LinWidthsError(Exception):
    """Base class for all package errors."""


class DegenerateDenominator(LinWidthsError):
    """A defining linear equation became singular (zero denominator)."""


class UncoveredCase(LinWidthsError):
    """The parameter tuple falls in a region the case calculus leaves open."""

    def __init__(self, gap: str):
        super().__init__(f"uncovered region {gap!r} (q > 2)")
        self.gap = gap


class RegimeUnsupported(LinWidthsError):
    """No two-sided order formula is available for this (p, q) regime."""


class OutOfRange(LinWidthsError):
    """Interpolation parameter falls outside the open unit interval."""


class UnsupportedSource(LinWidthsError):
    """The brute-force oracle only handles source balls with finitely many
    extreme points (p = 1 or p = infinity)."""


class BudgetExceeded(LinWidthsError):
    """Optimisation budget ran out before any restart converged.

    Carries the best upper bound found so far in ``best_value``.
    """

    def __init__(self, best_value: float):
        super().__init__(f"budget exceeded, best value so far {best_value!r}")
        self.best_value = best_value


class AmbiguousDominance(LinWidthsError):
    """No strictly dominant exponent: the decay-rate table has a tie."""


class InclusionFailed(LinWidthsError):
    """A lower-bound construction's inclusion precondition failed numerically."""
