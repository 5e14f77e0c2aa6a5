"""Exception types raised by the library.

Numerical *outcomes* (a pole in a frequency response, an unstable verdict)
are returned as values; only contract violations and genuine numerical
failures raise.
"""


class SttfError(Exception):
    """Base class for all library errors."""


class DimMismatch(SttfError, ValueError):
    pass


class ZeroBaseNegativeExponent(SttfError, ZeroDivisionError):
    """A coordinate is zero where the polynomial carries a negative power of it."""


class DegeneratePde(SttfError, ValueError):
    """Every coefficient of the PDE (or of its discrete symbol) is zero."""


class ConstantRestriction(SttfError, ValueError):
    """Fixing the given coordinate leaves no dependence on the free variable."""


class RootFindingFailure(SttfError, ArithmeticError):
    """A polynomial root could not be certified by its residual."""


class OutOfBounds(SttfError, IndexError):
    pass


class CflViolation(SttfError, ValueError):
    pass


class BoundaryContamination(SttfError, ValueError):
    """The light cone of the initial data reaches the edge of the domain."""
