"""Exceptions raised by freeprim.

Every error carries the process exit code the CLI should report for it.
"""

from __future__ import annotations

EXIT_VERIFIED = 0
EXIT_VERDICT_FALSE = 1
EXIT_INPUT_ERROR = 2
EXIT_RESOURCE_CAP = 3


class FreePrimError(Exception):
    """Raised when an input or a computation violates a documented rule."""

    def __init__(self, message: str, exit_code: int = EXIT_INPUT_ERROR) -> None:
        super().__init__(message)
        self.message = message
        self.exit_code = exit_code


class AmbientMismatchError(FreePrimError):
    """Two subspaces or vectors live in ambient spaces of different dimension."""


class FiltrationInvalidError(FreePrimError):
    """A filtration table is not decreasing, not exhaustive or not locally finite."""


class PresentationInvalidError(FreePrimError):
    """A presentation table references impossible degrees or indices."""


class AxiomFailureError(FreePrimError):
    """A construction needs bialgebra axioms that the input does not satisfy."""


class DegreeDomainError(FreePrimError):
    """A per-degree operation was called outside its degree range."""


class TruncationError(FreePrimError):
    """A result would land above the truncation degree N."""


class PreconditionError(FreePrimError):
    """An argument does not satisfy the operation's precondition."""


class LiftFailedError(FreePrimError):
    """Gr(H) is not free at some degree, so generators cannot be lifted."""


class InvalidLieError(FreePrimError):
    """Bracket structure constants break antisymmetry or the Jacobi identity."""


class ResourceCapError(FreePrimError):
    """The request exceeds a configured size cap."""

    def __init__(self, message: str) -> None:
        super().__init__(message, exit_code=EXIT_RESOURCE_CAP)


class InvariantViolation(FreePrimError):
    """An algebraic identity that must hold by construction failed."""

    def __init__(self, message: str) -> None:
        super().__init__(message, exit_code=EXIT_VERDICT_FALSE)
