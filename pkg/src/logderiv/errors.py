"""Exception types shared across the engine."""

from __future__ import annotations


class PreconditionError(ValueError):
    """A mathematical precondition was violated.

    Raised for non-primitive inputs, non-invertible derivations,
    non-homogeneous elements, and similar invalid arguments.
    """


class PresentationError(PreconditionError):
    """A Lie-algebra presentation failed validation (grading, Jacobi,
    or derivation compatibility)."""


class ParseError(ValueError):
    """Malformed textual input. ``column`` is 1-based when known."""

    def __init__(self, message: str, column: int | None = None):
        if column is not None:
            message = f"{message} (column {column})"
        super().__init__(message)
        self.column = column
