"""Exception types shared across the package.

The hierarchy separates caller mistakes (bad arguments, malformed input
files) from numeric failures (iterations that did not converge, truncation
targets that cannot be met) so the command line layer can map them onto
distinct exit codes.
"""

from __future__ import annotations


class LfkitError(Exception):
    """Base class for all package-specific errors."""


class DomainError(LfkitError, ValueError):
    """An argument lies outside the documented domain of an operation."""


class PoleError(DomainError):
    """Evaluation was requested exactly at a pole."""


class DegenerateCenterError(DomainError):
    """The center value of a disc vanishes, so Jensen averaging is undefined."""


class IngestionError(LfkitError, ValueError):
    """Input data (form files, coefficient feeds) failed validation."""


class FormValidationError(IngestionError):
    """A form description violates a structural invariant."""


class InsufficientTableError(LfkitError, ValueError):
    """A coefficient table does not reach the truncation point an operation needs.

    Attributes:
        required_limit: smallest table limit that would have sufficed.
    """

    def __init__(self, message: str, required_limit: int):
        super().__init__(message)
        self.required_limit = int(required_limit)


class NumericError(LfkitError, ArithmeticError):
    """An iterative or truncated numeric procedure missed its target.

    Attributes:
        residual: the achieved residual or tail estimate, when known.
    """

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class CapacityError(LfkitError, RuntimeError):
    """A request exceeds a configured size cap."""


class OracleWindowError(DomainError):
    """A cross-check was requested outside the window where the oracle is trusted."""
