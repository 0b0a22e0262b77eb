"""Exception hierarchy shared by every module.

Errors fall into two families: precondition failures (the caller asked for
something outside the domain of an operation) and invariant violations (a
computed object broke a structural law).  The CLI maps them to exit codes.
"""

from __future__ import annotations


class RefradError(Exception):
    """Base class for all library errors."""

    exit_code = 3


class PreconditionError(RefradError):
    exit_code = 3


class InvariantViolation(RefradError):
    exit_code = 4


class ParseError(RefradError):
    """Malformed textual input, annotated with a 1-based line and column."""

    exit_code = 2

    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class PrecisionLoss(PreconditionError):
    pass


class GradeMismatch(PreconditionError):
    pass


class NotBoundaryField(PreconditionError):
    pass


class RootUndefined(PreconditionError):
    pass


class EmptyPolynomial(PreconditionError):
    pass


class SlopeAbsent(PreconditionError):
    pass


class ResidueFactorizationOverflow(PreconditionError):
    pass


class DerivationMismatch(PreconditionError):
    pass


class CyclicSearchExhausted(PreconditionError):
    pass


class UnresolvedNonvisible(PreconditionError):
    pass


class NotPure(PreconditionError):
    pass


class CriticalRadius(PreconditionError):
    pass


class CharZero(PreconditionError):
    pass


class NotCritical(PreconditionError):
    pass


class IndexOutOfRange(PreconditionError):
    pass


class NonConvexSamples(InvariantViolation):
    pass


class SlopeOutsideLattice(InvariantViolation):
    pass


class NotSolvable(PreconditionError):
    pass


class NotPureAtBoundary(PreconditionError):
    pass


class NotReduced(PreconditionError):
    pass


class TameCharacter(PreconditionError):
    pass


class ParamMismatch(PreconditionError):
    pass


class NotIntegrable(InvariantViolation):
    pass
