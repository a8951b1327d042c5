"""Exception hierarchy."""

from __future__ import annotations

__all__ = [
    "ModelError",
    "ModelSyntaxError",
    "IntegrabilityError",
    "NilpotencyError",
    "HypothesisError",
    "NotSolvableError",
]


class ModelError(ValueError):
    """Invalid model description."""


class ModelSyntaxError(ModelError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


class IntegrabilityError(ModelError):
    """Some d(phi^k) has a (0,2)-component."""


class NilpotencyError(ModelError):
    """d^2 != 0 on some generator."""


class HypothesisError(RuntimeError):
    """A theorem hypothesis required by an operation does not hold.

    ``condition`` names the failing condition, e.g. ``"B^{2,1}"``.
    """

    def __init__(self, condition: str, detail: str = ""):
        msg = f"{condition} fails"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.condition = condition
        self.detail = detail


class NotSolvableError(ValueError):
    """A linear equation has no solution; ``residual`` carries the obstruction."""

    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual
