"""Exception hierarchy shared by all modules."""


class RSCDError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(RSCDError, ValueError):
    """Model or function parameters violate a precondition."""


class InvalidInputError(RSCDError, ValueError):
    """A point or vector argument is malformed (e.g. not in the zero-sum hyperplane)."""


class InvalidIndexError(RSCDError, IndexError):
    """A lattice index lies outside the truncated dominant cone."""


class SingularValueError(RSCDError, ArithmeticError):
    """A sine denominator vanished (to within the singularity threshold)."""

    def __init__(self, message, root=None):
        super().__init__(message)
        self.root = root


class DegeneracyError(RSCDError, ArithmeticError):
    """A joint eigenspace that must be one-dimensional is not."""


class IllConditionedSamplingError(RSCDError, ArithmeticError):
    """Least-squares recovery of expansion coefficients failed its residual check."""


class FormulaViolationError(RSCDError, AssertionError):
    """Two independent evaluations of a closed-form identity disagree."""


class SpectralMismatchError(RSCDError, AssertionError):
    """A numerically computed eigenvector could not be matched to a predicted label."""
