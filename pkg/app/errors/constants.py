"""
Error message constants for the hashing toolkit.

All error messages are centralized here; the exception classes and the
command-line error handler only reference them.
"""

from enum import Enum
from typing import Any, Dict, Optional, Sequence


class ErrorCodes(Enum):
    """Process exit codes for different error types."""

    SUCCESS = 0

    # Unexpected failures (1)
    INTERNAL_ERROR = 1

    # Usage, configuration and argument errors (2)
    INVALID_ARGUMENT = 2
    DIMENSION_MISMATCH = 2
    CONFIG_ERROR = 2
    FILE_FORMAT_ERROR = 2

    # Numerical errors (3)
    NUMERICAL_ERROR = 3
    DEGENERATE_COVARIANCE = 3
    MANIFOLD_DOMAIN = 3
    SINGULAR_SYSTEM = 3


class ErrorMessages:
    """Centralized error messages organized by module."""

    class Descriptor:
        EMPTY_SET = "A descriptor set must contain at least one vector."
        RAGGED_SET = "All descriptor vectors of a sample must share one dimension."
        NON_FINITE = "Descriptor vectors must be finite."
        EMPTY_COLLECTION = "At least one descriptor set is required."
        TOO_FEW_DESCRIPTORS = "Pooled descriptor count {count} is smaller than dictionary size {k}."
        INVALID_DICTIONARY_SIZE = "Dictionary size must be at least 1, got {k}."
        NON_FINITE_CENTER = "Dictionary centers must be finite."
        DEGENERATE_COVARIANCE = "A single descriptor needs eps_spd > 0 to produce a covariance."
        HISTOGRAM_NOT_NORMALIZED = "Histogram entries must be non-negative and sum to 1."
        COVARIANCE_NOT_SYMMETRIC = "Covariance matrix must be symmetric."

    class Kernel:
        NOT_SPD = "Matrix is not symmetric positive definite (smallest eigenvalue {eigenvalue:.3e})."
        NON_FINITE_INPUT = "Kernel inputs must be finite."
        INVALID_VIEW = "View index must be 0, 1 or 2, got {view}."
        TOO_MANY_ANCHORS = "Cannot select {requested} anchors from {available} samples."
        NO_ACTIVE_VIEW = "At least one view must have a positive anchor count."
        UNKNOWN_MODE = "Unknown kernel combination mode '{mode}'."
        UNSHARED_KERNELS = "Image and text must use the same kernel for every view."

    class Optimizer:
        SINGULAR_SYSTEM = "The normal-equation system is singular or ill-conditioned."
        LABEL_ENTRIES = "Label matrix entries must be 0 or 1."
        EMPTY_LABEL_COLUMN = "Every sample must carry at least one label."
        NO_ACTIVE_TERM = "At least one objective term must stay active."
        NON_BINARY_CODES = "Binary code entries must be exactly -1 or +1."

    class Index:
        LENGTH_MISMATCH = "Binary codes have different lengths ({left} vs {right})."
        RADIUS_OUT_OF_RANGE = "Hamming radius must be within [0, {length}], got {radius}."
        INVALID_TOP_R = "top_R must be at least 1, got {top_r}."
        ID_COUNT_MISMATCH = "Index needs exactly one id per code."

    class Evaluation:
        EMPTY_QUERY_SET = "At least one query is required."
        INVALID_R = "R must satisfy 1 <= R <= {length}, got {r}."
        SINGLE_LABEL_REQUIRED = "single_label relevance needs one-hot label columns."

    class Config:
        INVALID_CONFIG = "Configuration file is invalid."
        MISSING_PATH = "Configured path does not exist: {path}"
        UNREADABLE = "Configuration file could not be read: {path}"

    class FileFormat:
        BAD_HEADER = "Unexpected header in {path}: expected '{expected}'."
        BAD_RECORD = "Malformed record at {path}:{line}."
        UNKNOWN_SAMPLE = "Sample '{sample_id}' is missing from {path}."

    class System:
        INTERNAL_ERROR = "An unexpected error occurred."
        NUMERICAL_ERROR = "A numerical error occurred."


class ErrorDetails:
    """Detailed error information for logging and diagnostics."""

    @staticmethod
    def invalid_argument(argument: str, value: Any, message: str) -> Dict[str, Any]:
        return {
            "error_type": "invalid_argument",
            "argument": argument,
            "value": str(value) if value is not None else None,
            "message": message,
            "code": ErrorCodes.INVALID_ARGUMENT.value,
        }

    @staticmethod
    def dimension_mismatch(
        operation: str, expected: Sequence[int] | int, actual: Sequence[int] | int
    ) -> Dict[str, Any]:
        return {
            "error_type": "dimension_mismatch",
            "operation": operation,
            "expected": str(expected),
            "actual": str(actual),
            "code": ErrorCodes.DIMENSION_MISMATCH.value,
        }

    @staticmethod
    def numerical(operation: str, original_error: Optional[Exception] = None) -> Dict[str, Any]:
        return {
            "error_type": "numerical_error",
            "operation": operation,
            "original_error": str(original_error) if original_error else None,
            "code": ErrorCodes.NUMERICAL_ERROR.value,
        }

    @staticmethod
    def file_format(path: str, line: Optional[int] = None, reason: Optional[str] = None) -> Dict[str, Any]:
        return {
            "error_type": "file_format_error",
            "path": path,
            "line": line,
            "reason": reason,
            "code": ErrorCodes.FILE_FORMAT_ERROR.value,
        }
