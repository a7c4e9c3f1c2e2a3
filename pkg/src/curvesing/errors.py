"""Exception hierarchy shared by every module.

Exit codes used by the command line front end are attached to the classes so
that ``cli`` can map a failure to a status without a lookup table.
"""


class CurveSingError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class InputError(CurveSingError):
    exit_code = 2


class PrecisionExhausted(CurveSingError):
    """A coefficient beyond the known precision was needed."""

    exit_code = 3


class UnsupportedCase(CurveSingError):
    exit_code = 4


class DivisionByZero(ZeroDivisionError, CurveSingError):
    pass


class NoRootInField(ArithmeticError, CurveSingError):
    """No n-th root exists inside Q(i).  A documented outcome, not a bug."""


class PreconditionError(ValueError, CurveSingError):
    pass


class CompositionOrderError(PreconditionError):
    """Inner series of a composition has a nonzero constant term."""


class OrderNotDivisible(PreconditionError):
    pass


class NotFinitelyDetermined(PrecisionExhausted):
    """Characteristic exponents did not reach gcd 1 within precision."""


class EliminationStuck(CurveSingError):
    exit_code = 4


class NonPolynomialInput(InputError):
    pass


class SameBranch(InputError):
    pass


class TooManyBranches(UnsupportedCase):
    pass


class UnsupportedSmoothBranches(UnsupportedCase):
    pass


class UnsupportedMultiBranch(UnsupportedCase):
    pass


class RefutationFailure(CurveSingError):
    """A linear map outside both (anti)holomorphic families passed the constraint."""


class ParseError(InputError):
    def __init__(self, message, line=None, column=None, path=None):
        self.line = line
        self.column = column
        self.path = path
        where = []
        if line is not None:
            where.append(f"line {line}, column {column}")
        if path:
            where.append(f"at {path}")
        super().__init__(message + (f" ({'; '.join(where)})" if where else ""))


class ValidationError(ParseError):
    pass
