"""Exception hierarchy shared across the package.

Two families matter to callers: ``ValidationError`` (bad inputs or
configuration, CLI exit code 1) and ``NumericalError`` (the computation
itself failed, CLI exit code 3).
"""


class CogomError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(CogomError, ValueError):
    """Invalid input data or configuration."""


class ShapeError(ValidationError):
    """Matrix has the wrong shape (non-square, mismatched rows, ...)."""


class ArgumentError(ValidationError):
    """Scalar argument out of its admissible range."""


class GenerationError(ValidationError):
    """A simulation config produced invalid quantities (e.g. means outside [0, 1])."""


class NumericalError(CogomError, RuntimeError):
    """A numerical procedure failed on otherwise valid input."""


class ConvergenceError(NumericalError):
    """Eigensolver did not reach the required residual."""


class GeometryError(NumericalError):
    """Degenerate simplex geometry (vanishing norms, ill-conditioned vertices)."""


class RankError(NumericalError):
    """A matrix that must be full rank is numerically singular."""


class SignalError(NumericalError):
    """The requested rank exceeds the usable signal (non-positive eigenvalues)."""


class DegenerateSpectrumError(NumericalError):
    """Spectral gaps needed for the search-range formula vanish."""
