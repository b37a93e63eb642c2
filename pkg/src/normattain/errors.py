"""Exception hierarchy. Every error carries the CLI exit code it maps to."""

from __future__ import annotations


class NormAttainError(Exception):
    """Base class for all library errors."""

    exit_code = 1


# -- exit 1: validation and parse errors ---------------------------------------


class ValidationError(NormAttainError):
    """Input violates a documented precondition or schema."""


class ExprSyntaxError(ValidationError):
    """Expression text does not match the grammar."""

    def __init__(self, message: str, offset: int, expected: frozenset[str] | set[str] = frozenset()) -> None:
        self.reason = message
        self.offset = offset
        self.expected = frozenset(expected)
        wanted = ", ".join(sorted(self.expected))
        detail = f"{message} at offset {offset}"
        if wanted:
            detail += f" (expected one of: {wanted})"
        super().__init__(detail)


class EvalError(NormAttainError):
    """Expression evaluation failed at a given point."""

    DIVISION_BY_ZERO = "DivisionByZero"
    NON_FINITE = "NonFiniteResult"
    UNDEFINED_POINT = "UndefinedPoint"

    def __init__(self, kind: str, x: float, detail: str = "") -> None:
        self.kind = kind
        self.x = x
        message = f"{kind} at x={x!r}"
        if detail:
            message += f": {detail}"
        super().__init__(message)


class NotHermitian(ValidationError):
    pass


class NotProjection(ValidationError):
    pass


class NotIdempotent(ValidationError):
    pass


class NotSkew(ValidationError):
    pass


class NotInAlgebra(ValidationError):
    pass


class DegenerateSpectrum(ValidationError):
    pass


class ModelMismatch(ValidationError):
    pass


class EmptyModel(ValidationError):
    pass


# -- exit 2: numerical breakdown -----------------------------------------------


class NumericalFailure(NormAttainError):
    """A numerical procedure broke down or produced inconsistent results."""

    exit_code = 2


class NoConvergence(NumericalFailure):
    pass


class PairingFailure(NumericalFailure):
    pass


class AfriatViolation(NumericalFailure):
    pass


class RadicandNegative(NumericalFailure):
    pass


# -- exit 3 --------------------------------------------------------------------


class IndeterminateMeasure(NormAttainError):
    """The verdict depends on the measure class of an interval declared ``unspecified``."""

    exit_code = 3
