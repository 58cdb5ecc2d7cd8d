"""
Error handling module for the hashing toolkit.

This module provides centralized error handling with:
- Error message constants
- Custom exception classes
- The command-line error handler
"""

from .constants import ErrorCodes, ErrorDetails, ErrorMessages
from .exceptions import (
    BaseAppException,
    ConfigError,
    DegenerateCovarianceError,
    DimensionMismatchError,
    EmptyInputError,
    FileFormatError,
    InvalidArgumentError,
    ManifoldDomainError,
    NumericalError,
    SingularSystemError,
)
from .handlers import ErrorReportBuilder, handle_command_errors

__all__ = [
    "ErrorCodes",
    "ErrorDetails",
    "ErrorMessages",
    "BaseAppException",
    "ConfigError",
    "DegenerateCovarianceError",
    "DimensionMismatchError",
    "EmptyInputError",
    "FileFormatError",
    "InvalidArgumentError",
    "ManifoldDomainError",
    "NumericalError",
    "SingularSystemError",
    "ErrorReportBuilder",
    "handle_command_errors",
]
