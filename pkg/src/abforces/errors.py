"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`ABForcesError`, so callers (and the CLI) can catch a single type.
"""


class ABForcesError(Exception):
    """Base class for all package errors."""


class InputError(ABForcesError, ValueError):
    """Non-finite or otherwise malformed numeric input."""


class RangeError(ABForcesError, ValueError):
    """Argument outside the supported working range."""


class InternalError(ABForcesError, RuntimeError):
    """A numerical guard that should never trip was violated."""


class TruncationError(ABForcesError, RuntimeError):
    """A partial-wave series could not be truncated to the required tolerance."""


class StiffnessError(ABForcesError, RuntimeError):
    """The interior log-derivative hit a pole (node of the radial function)."""


class ToleranceError(ABForcesError, RuntimeError):
    """Radial integration did not converge under refinement."""


class DegenerateMatchError(ABForcesError, RuntimeError):
    """The channel matching denominator vanished."""


class QuadratureError(ABForcesError, RuntimeError):
    """Angular quadrature failed its grid-doubling check."""


class AmbiguityError(ABForcesError, ValueError):
    """Slope data cannot distinguish between competing values of kappa."""


class FitError(ABForcesError, RuntimeError):
    """A convergence fit was too poor to report."""


class ParseError(ABForcesError, ValueError):
    """Configuration text is not syntactically valid."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + where)


class ValidationError(ABForcesError, ValueError):
    """Configuration is well-formed but violates a field constraint."""

    def __init__(self, field, constraint):
        self.field = field
        self.constraint = constraint
        super().__init__(f"{field}: {constraint}")
