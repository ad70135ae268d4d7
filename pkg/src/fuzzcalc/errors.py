"""Exception hierarchy shared by all fuzzcalc modules."""


class FuzzyError(Exception):
    """Base class for every domain error raised by this package."""


class MalformedTriplet(FuzzyError):
    """Triangular triplet (d, e, f) violates d <= e <= f."""


class Crossed(FuzzyError):
    """Lower envelope exceeds the upper envelope at some alpha level."""


class NotNested(FuzzyError):
    """Alpha-cuts fail to shrink as alpha grows (envelopes not monotone)."""


class GridMismatch(FuzzyError):
    """Operands live on different alpha grids; resample explicitly first."""


class DivisorStraddlesZero(FuzzyError):
    """Division by a fuzzy number whose support contains zero."""


class ImproperOperand(FuzzyError):
    """An operation received a non-nested (improper) fuzzy number.

    Improper values are only ever produced by the gH-difference; everything
    else refuses to compute with them.
    """


class ExprSyntaxError(FuzzyError):
    """Expression text failed to parse; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownFunction(ExprSyntaxError):
    """Function name other than exp/sin/cos used in an expression."""


class UnboundVariable(FuzzyError):
    """Expression refers to a variable absent from the environment."""


class NotDifferentiable(FuzzyError):
    """One-sided difference quotients failed to agree within tolerance."""


class NoLimit(FuzzyError):
    """Coefficient-quotient probes do not settle on a limit."""


class NotSimplifiable(FuzzyError):
    """Coefficient rule does not match the structure the symbolic
    ratio mode knows how to cancel."""


class ProblemFileError(FuzzyError):
    """Malformed problem file or command-line binding."""
