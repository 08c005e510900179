"""Exception hierarchy.

Three families map onto the command-line exit codes: parse errors (2),
precondition violations (3) and budget/explosion guards (4).
"""


class StringRankError(Exception):
    """Base class for every error raised by the package."""


class ParseError(StringRankError, ValueError):
    """Malformed input text. Carries an optional (line, column) position."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class PreconditionError(StringRankError, ValueError):
    """An operation was called with arguments violating its contract."""


class BudgetError(StringRankError, RuntimeError):
    """A configured size or search budget would be exceeded."""


# gf
class NotPrime(PreconditionError):
    pass


class ReducibleModulus(PreconditionError):
    pass


class DegreeMismatch(PreconditionError):
    pass


class NotMonic(PreconditionError):
    pass


class AmbientMismatch(PreconditionError):
    pass


# algebra
class TooManyArrows(PreconditionError):
    pass


class ConditionTwoViolation(PreconditionError):
    pass


class ConditionThreeViolation(PreconditionError):
    pass


class NotNilpotent(PreconditionError):
    pass


class NotMonomial(PreconditionError):
    pass


class MatrixSyntaxError(ParseError):
    pass


class UnknownPath(ParseError):
    pass


# modules
class AlgebraMismatch(PreconditionError):
    pass


class InvalidString(PreconditionError):
    def __init__(self, message, condition=None, position=None):
        self.condition = condition
        self.position = position
        super().__init__(message)


class NotCyclic(PreconditionError):
    pass


class ReducibleF(PreconditionError):
    pass


class FVanishesAtZero(PreconditionError):
    pass


class NotSubmodule(PreconditionError):
    pass


# rank / pp
class SuiteMismatch(PreconditionError):
    pass


class MethodDisagreement(StringRankError, AssertionError):
    """Two independent computations of the same quantity disagree (a bug)."""


class NotIsolating(PreconditionError):
    pass


# strings
class EmptyGraph(PreconditionError):
    pass


class DecodeFailure(PreconditionError):
    pass


class RadiusMismatch(PreconditionError):
    pass


# limitlab
class BadEpsilon(PreconditionError):
    pass


class UnsupportedRawModule(PreconditionError):
    pass


class TooSmall(PreconditionError):
    pass


class ExplosionGuard(BudgetError):
    pass


# params
class UnknownDecomposition(PreconditionError):
    pass


class NoTileWithinKappa(StringRankError):
    """The tester found no catalog tile within the agreement radius."""

    def __init__(self, message, radius=None, best=None):
        self.radius = radius
        self.best = best
        super().__init__(message)


class BudgetExceeded(BudgetError):
    pass
