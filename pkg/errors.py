"""
Error Types

Exceptions raised by the algebra library and the problem-file parser.
Input problems are ValueError subclasses so callers can treat them the same
way as configuration errors.
"""

from typing import Any, Optional


class AlgebraError(ValueError):
    """Invalid algebraic input: rank mismatch, zero element, singular change."""


class NotMonomialError(AlgebraError):
    """An operation that needs monomial generators received a polynomial."""


class InhomogeneousError(AlgebraError):
    """An operation that needs homogeneous input received something else."""


class NotQuasiStableError(AlgebraError):
    """The monomial ideal has no finite Pommaret basis."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


class ProblemSyntaxError(ValueError):
    """Syntax error in a problem file, with 1-based line and column."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnknownVariableError(ProblemSyntaxError):
    """A generator uses a name that is not declared in the ring line."""


class LimitExceededError(RuntimeError):
    """A configured iteration or degree cap was hit.

    This is an implementation limit, not a mathematical impossibility.
    """

    def __init__(self, message: str, partial: Optional[Any] = None):
        super().__init__(message)
        self.partial = partial
