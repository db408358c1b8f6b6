"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`WPFlowError`;
the input-validation family also derives from :class:`ValueError` so callers
that only catch the builtin keep working.
"""


class WPFlowError(Exception):
    """Base class for library errors."""


class InvalidInputError(WPFlowError, ValueError):
    """Malformed or out-of-contract input (non-finite data, bad parameters)."""


class OutOfDomainError(WPFlowError, ValueError):
    """An evaluation point falls outside the sampled window."""


class ResolutionError(WPFlowError, ValueError):
    """The discretisation is too coarse for the requested evaluation."""


class DegeneracyError(WPFlowError, ArithmeticError):
    """A denominator vanished, e.g. |d rho| below threshold in a Beltrami quotient."""


class StepSizeError(WPFlowError, ArithmeticError):
    """An ODE snapshot lost monotonicity; refine the step size."""


class MonotonicityError(WPFlowError, ArithmeticError):
    """A map expected to be increasing has a non-positive derivative."""


class ExpOverflowError(WPFlowError, OverflowError):
    """exp(u) overflowed while building a primitive."""


class SpecParseError(InvalidInputError):
    """A function/field literal could not be parsed.

    ``line`` and ``column`` locate the problem in the source text when known.
    """

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
