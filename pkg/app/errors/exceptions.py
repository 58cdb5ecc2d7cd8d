"""
Custom exception classes for the hashing toolkit.

Every exception carries an ``ErrorCodes`` member whose value is the exit code
the command-line layer returns for it.
"""

from typing import Any, Dict, Optional, Sequence

from .constants import ErrorCodes, ErrorDetails, ErrorMessages


class BaseAppException(Exception):
    """Base exception class for all application-specific exceptions."""

    def __init__(
        self,
        message: str,
        error_code: ErrorCodes,
        details: Optional[Dict[str, Any]] = None,
        user_message: Optional[str] = None,
    ):
        self.message = message
        self.error_code = error_code
        self.details = details or {}
        self.user_message = user_message or message
        super().__init__(self.message)

    def to_dict(self) -> Dict[str, Any]:
        """Convert exception to a dictionary for diagnostics."""
        return {
            "error": True,
            "message": self.user_message,
            "error_code": self.error_code.value,
            "error_type": self.__class__.__name__,
            "details": self.details,
        }

    @property
    def exit_code(self) -> int:
        return self.error_code.value


class InvalidArgumentError(BaseAppException):
    """Raised when an argument violates an operation's precondition."""

    def __init__(
        self,
        message: str,
        argument: Optional[str] = None,
        value: Any = None,
        user_message: Optional[str] = None,
    ):
        details = ErrorDetails.invalid_argument(
            argument=argument or "unknown",
            value=value,
            message=message,
        )
        super().__init__(
            message=message,
            error_code=ErrorCodes.INVALID_ARGUMENT,
            details=details,
            user_message=user_message or message,
        )


class EmptyInputError(InvalidArgumentError):
    """Raised when a collection that must be non-empty is empty."""

    def __init__(self, message: str, argument: Optional[str] = None):
        super().__init__(message=message, argument=argument, value=0)


class DimensionMismatchError(InvalidArgumentError):
    """Raised when array shapes do not agree."""

    def __init__(
        self,
        operation: str,
        expected: Sequence[int] | int,
        actual: Sequence[int] | int,
    ):
        message = f"Dimension mismatch in {operation}: expected {expected}, got {actual}"
        super().__init__(message=message, argument=operation, value=actual)
        self.details = ErrorDetails.dimension_mismatch(operation, expected, actual)
        self.error_code = ErrorCodes.DIMENSION_MISMATCH


class ConfigError(BaseAppException):
    """Raised when a run configuration cannot be loaded or validated."""

    def __init__(
        self,
        message: str = ErrorMessages.Config.INVALID_CONFIG,
        path: Optional[str] = None,
        errors: Optional[list] = None,
    ):
        details = {"path": path, "errors": errors or []}
        super().__init__(
            message=message,
            error_code=ErrorCodes.CONFIG_ERROR,
            details=details,
            user_message=message,
        )


class FileFormatError(BaseAppException):
    """Raised when an input file does not follow its declared format."""

    def __init__(
        self,
        message: str,
        path: str,
        line: Optional[int] = None,
        reason: Optional[str] = None,
    ):
        super().__init__(
            message=message,
            error_code=ErrorCodes.FILE_FORMAT_ERROR,
            details=ErrorDetails.file_format(path, line, reason),
        )


class NumericalError(BaseAppException):
    """Raised when a numerical routine cannot produce a valid result."""

    def __init__(
        self,
        operation: str,
        message: str = ErrorMessages.System.NUMERICAL_ERROR,
        original_error: Optional[Exception] = None,
        error_code: ErrorCodes = ErrorCodes.NUMERICAL_ERROR,
    ):
        super().__init__(
            message=message,
            error_code=error_code,
            details=ErrorDetails.numerical(operation, original_error),
        )


class DegenerateCovarianceError(NumericalError):
    """A single descriptor with no regularization floor has no covariance."""

    def __init__(self, sample_id: Optional[str] = None):
        super().__init__(
            operation="compute_covariance",
            message=ErrorMessages.Descriptor.DEGENERATE_COVARIANCE,
            error_code=ErrorCodes.DEGENERATE_COVARIANCE,
        )
        if sample_id is not None:
            self.details["sample_id"] = sample_id


class ManifoldDomainError(NumericalError):
    """Matrix logarithm requested for a matrix that is not SPD."""

    def __init__(self, eigenvalue: float):
        super().__init__(
            operation="log_map",
            message=ErrorMessages.Kernel.NOT_SPD.format(eigenvalue=eigenvalue),
            error_code=ErrorCodes.MANIFOLD_DOMAIN,
        )
        self.details["eigenvalue"] = eigenvalue


class SingularSystemError(NumericalError):
    """Normal-equation system that cannot be solved reliably."""

    def __init__(self, operation: str, original_error: Optional[Exception] = None):
        super().__init__(
            operation=operation,
            message=ErrorMessages.Optimizer.SINGULAR_SYSTEM,
            original_error=original_error,
            error_code=ErrorCodes.SINGULAR_SYSTEM,
        )
