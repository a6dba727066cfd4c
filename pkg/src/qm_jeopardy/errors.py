"""Exception hierarchy for qm-jeopardy.

Everything a caller can reasonably recover from derives from JeopardyError,
which the CLI maps to exit code 1.
"""

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .model import ValidationReport


class JeopardyError(Exception):
    """Base class for all domain errors raised by this package."""

    pass


class DomainError(JeopardyError, ValueError):
    """Raised for out-of-range parameters, invalid wells and invalid spikes."""

    pass


class RationalOverflowError(DomainError, OverflowError):
    """Raised when an exact rational leaves the signed 64-bit range."""

    pass


class StateValidationError(DomainError):
    """Raised when an operation needs a valid state and did not get one."""

    def __init__(self, message: str, report: "ValidationReport | None" = None) -> None:
        super().__init__(message)
        self.report = report


class UnsolvableKinkError(StateValidationError):
    """Raised when a kink sits on a node, so no finite delta can produce it."""

    def __init__(self, index: int, x) -> None:
        super().__init__(f"slope changes at knot {index} (x={x}) where psi = 0")
        self.index = index
        self.x = x


class NotNormalizedError(DomainError):
    pass


class NoZeroEnergyStateError(JeopardyError):
    """Raised by callers that need a zero-energy eigenstate and got none."""

    pass


class NotAnEigenvalueError(DomainError):
    pass


class GenerationError(JeopardyError):
    """Raised when the problem generator runs out of resampling attempts."""

    pass


class DocumentParseError(JeopardyError):
    """Raised for malformed or non-canonical Documents.

    Args:
        message: What went wrong
        location: JSON path (``payload.knots[2][0]``) or ``line X column Y``
    """

    def __init__(self, message: str, location: str = "") -> None:
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class ConfigValidationError(JeopardyError):
    """Raised when configuration has critical errors."""

    pass
