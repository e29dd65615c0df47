"""Exception types shared across the workbench.

Symbolic failures (bad gradings, non-invertible leading terms) are bugs or
precondition violations and raise; probabilistic / numeric failures carry
enough context to be reported in a verdict instead of aborting a whole run.
"""


class QTripleError(Exception):
    """Base class for all workbench errors."""


class WeightMapMismatch(QTripleError):
    """Two truncated series with different gradings were combined."""


class NotInvertible(QTripleError):
    """Graded inversion requested for a series whose minimal-weight
    homogeneous component is not a single monomial."""


class WeightOverflow(QTripleError):
    """An operation (substitution, infinite product) cannot be truncated
    soundly under the current grading."""


class LimitUndefined(QTripleError):
    """A symbolic limit left a negative exponent in the limit variable."""


class PoleHit(QTripleError):
    """A random evaluation point hit a pole and retries were exhausted."""


class RegionViolation(QTripleError):
    """A numeric point lies outside the convergence region required by the
    identity being evaluated."""


class NonConvergence(QTripleError):
    """A numeric sequence failed to converge within its iteration budget."""


class NumericOverflow(QTripleError):
    """A numeric partial sum overflowed the working precision."""


class Unstable(QTripleError):
    """Window/shell stabilization was not reached; carries the first
    differing monomial when known."""

    def __init__(self, message, first_difference=None):
        super().__init__(message)
        self.first_difference = first_difference


class VerificationFailed(QTripleError):
    """An exact transform produced a nonzero residual (signals a coding
    error, not a mathematical one)."""
