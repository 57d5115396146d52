"""Error types with stable machine-readable codes."""

from __future__ import annotations


class SpervalError(Exception):
    """Base class; ``code`` is stable and used by the CLI and JSON output."""

    code = "error"

    def __init__(self, message: str = "", **data):
        super().__init__(message or self.code)
        self.data = data

    def to_dict(self) -> dict:
        out = {"code": self.code, "message": str(self)}
        out.update({k: str(v) for k, v in self.data.items()})
        return out


class DivisionByZero(SpervalError, ZeroDivisionError):
    code = "division-by-zero"


class AmbiguousSign(SpervalError):
    code = "ambiguous-sign"


class PoleInInterval(SpervalError):
    code = "pole-in-interval"


class EndpointIsRoot(SpervalError):
    code = "endpoint-is-root"


class ArityMismatch(SpervalError, ValueError):
    code = "arity-mismatch"


class ValueUnknown(SpervalError):
    """A valuation could not be decided below the series truncation."""

    code = "value-unknown"


class TruncationExceeded(SpervalError):
    """Retryable: raise the truncation order and run again."""

    code = "truncation-exceeded"


class ResidueNotInBaseField(SpervalError):
    code = "residue-not-in-base-field"


class NonTerminating(SpervalError):
    code = "non-terminating-guard"


class LevelInsufficient(SpervalError):
    code = "level-insufficient"


class NotFoundWithinBudget(SpervalError):
    code = "not-found-within-budget"


class FInSeparatingIdeal(SpervalError):
    code = "f-in-separating-ideal"


class CenterEqualsPoint(SpervalError):
    code = "center-equals-point"


class StepBudgetExceeded(SpervalError):
    code = "step-budget-exceeded"


class NotReachedWithinSteps(SpervalError):
    code = "not-reached-within-steps"


class InvalidEvent(SpervalError):
    code = "invalid-event"


class SyntaxErrorAt(SpervalError):
    code = "syntax-error"

    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"{message} (line {line}, col {col})", line=line, col=col)
        self.line = line
        self.col = col


class UnknownVariable(SpervalError):
    code = "unknown-variable"


class InvariantViolation(SpervalError):
    code = "invariant-violation"


class Mismatch(SpervalError):
    code = "mismatch"
