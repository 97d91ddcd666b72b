"""Exception hierarchy shared across the package."""


class FaslocError(Exception):
    """Base class for all errors raised by fasloc."""


class NotPositiveDefinite(FaslocError):
    """An information matrix is singular or indefinite where SPD is required."""


class DegenerateGeometry(FaslocError):
    """User and anchor are (numerically) collocated; bearing is undefined."""


class InvalidConfig(FaslocError):
    """A parameter or configuration violates a documented invariant."""


class ParseError(InvalidConfig):
    """A config file could not be parsed; message carries line/field context."""


class ValidationError(InvalidConfig):
    """A parsed config violates a cross-field invariant."""


class IndexOutOfRange(FaslocError, IndexError):
    """A port or anchor index is outside its valid 1-based range."""


class SingularBase(FaslocError):
    """The port-independent information matrix is singular and no
    regularization was requested."""


class Nonconvergence(FaslocError):
    """The relaxed solver stopped at max_iters with duality gap above tol."""

    def __init__(self, message: str, gap: float, iterations: int):
        super().__init__(message)
        self.gap = gap
        self.iterations = iterations


class TooLarge(FaslocError):
    """Exhaustive enumeration was requested beyond the subset-count cap."""
