"""Exception types shared across the package.

Validation problems raise ``ValueError`` (or a subclass); numerical quality
failures raise subclasses of :class:`NumericalQualityError` so callers such as
the command line layer can map them to a distinct exit status.
"""


class NumericalQualityError(RuntimeError):
    """A computation finished but its accuracy guarantee could not be met."""


class PrecisionLossError(NumericalQualityError):
    """Extended-precision determinant lost too many digits."""

    def __init__(self, message: str, digits_lost: float = 0.0):
        super().__init__(message)
        self.digits_lost = digits_lost


class TruncationError(NumericalQualityError):
    """Lattice-sum truncation error is not small against the result."""


class SolverDivergenceError(NumericalQualityError):
    """The Painleve integration left the Hastings-McLeod branch."""


class SolverToleranceError(NumericalQualityError):
    """The Painleve integration could not reach the requested tolerance."""


class InsufficientRangeError(NumericalQualityError):
    """A table does not cover the range a fit or lookup needs."""


class UnderflowError(NumericalQualityError):
    """A quantity fell below what the working precision can represent."""


class NoRootError(ValueError):
    """The elliptic-modulus constraint has no solution for this coupling."""


class StateSpaceError(ValueError):
    """Lattice oracle state space exceeds the configured cap."""


class LeakageWarning(UserWarning):
    """Probability mass escaped the emulated infinite domain."""
