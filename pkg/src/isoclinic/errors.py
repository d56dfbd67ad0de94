"""Exception hierarchy.

Exit-code mapping used by the CLI: ConfigError -> 1, PreconditionError -> 2,
ToleranceNotMet -> 3.  Everything raised by this package derives from
IsoclinicError.
"""


class IsoclinicError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 2


class ConfigError(IsoclinicError):
    """Malformed configuration, expression source, or gallery name."""

    exit_code = 1


class ExprError(ConfigError):
    """Problem in an expression's source text."""

    def __init__(self, message, offset=None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)


class ExprSyntaxError(ExprError):
    pass


class UnknownFunction(ExprError):
    pass


class NonIntegerExponent(ExprError):
    pass


class UnknownGallery(ConfigError):
    pass


class PreconditionError(IsoclinicError):
    """A solver or diagnostic precondition failed."""

    exit_code = 2


class EvaluationError(PreconditionError):
    """An expression could not be evaluated at the requested point."""


class DivisionByZero(EvaluationError):
    """A denominator vanished during evaluation; message names the subexpression."""


class WrongCausalSign(PreconditionError):
    pass


class SingularOnAxis(PreconditionError):
    pass


class TriadInvalid(PreconditionError):
    pass


class IncompatibleDPrime(PreconditionError):
    pass


class SignMismatch(PreconditionError):
    pass


class SingularDomain(PreconditionError):
    pass


class NotGoodCurve(PreconditionError):
    pass


class NotIsothermic(PreconditionError):
    pass


class NotSpacelike(PreconditionError):
    pass


class WrongClass(PreconditionError):
    pass


class OffQuadric(PreconditionError):
    pass


class NearSingular(PreconditionError):
    pass


class CurveOffSurface(PreconditionError):
    pass


class ToleranceNotMet(IsoclinicError):
    """Adaptive quadrature exhausted its refinements above the target tolerance."""

    exit_code = 3

    def __init__(self, message, estimate=None):
        self.estimate = estimate
        super().__init__(message)
