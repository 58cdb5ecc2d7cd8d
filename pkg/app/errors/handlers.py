"""
Error handlers for the command-line entry point.

Each command runs inside ``handle_command_errors``, which turns every failure
into a logged diagnostic on stderr and a process exit code.
"""

import functools
import json
import logging
import sys
from typing import Any, Callable, Dict, Optional

import numpy as np
from pydantic import ValidationError as PydanticValidationError

from .constants import ErrorCodes, ErrorMessages
from .exceptions import BaseAppException

logger = logging.getLogger(__name__)


class ErrorReportBuilder:
    """Builder for consistent diagnostics printed on stderr."""

    @staticmethod
    def build_error_report(
        message: str,
        exit_code: int,
        error_type: str = "error",
        details: Optional[Dict[str, Any]] = None,
    ) -> Dict[str, Any]:
        report: Dict[str, Any] = {
            "error": True,
            "message": message,
            "error_type": error_type,
            "exit_code": exit_code,
        }
        if details:
            report["details"] = details
        return report

    @staticmethod
    def build_validation_report(errors: list) -> Dict[str, Any]:
        """Build a report for pydantic validation errors with per-field messages."""
        field_errors = {
            ".".join(str(loc) for loc in error["loc"]) or "<root>": error["msg"]
            for error in errors
        }
        return ErrorReportBuilder.build_error_report(
            message=ErrorMessages.Config.INVALID_CONFIG,
            exit_code=ErrorCodes.CONFIG_ERROR.value,
            error_type="config_error",
            details={"field_errors": field_errors},
        )


def _emit(report: Dict[str, Any]) -> None:
    print(json.dumps(report, default=str), file=sys.stderr)


def app_exception_handler(command: str, exc: BaseAppException) -> int:
    logger.error(f"{command} failed: {exc.message}", extra={
        "error_type": exc.__class__.__name__,
        "error_code": exc.error_code.value,
        "details": exc.details,
    })
    _emit(exc.to_dict())
    return exc.exit_code


def validation_exception_handler(command: str, exc: PydanticValidationError) -> int:
    logger.warning(f"{command} rejected its configuration", extra={"errors": exc.errors()})
    report = ErrorReportBuilder.build_validation_report(exc.errors())
    _emit(report)
    return report["exit_code"]


def os_error_handler(command: str, exc: OSError) -> int:
    logger.error(f"{command} could not access a file: {exc}", extra={
        "path": getattr(exc, "filename", None),
    })
    report = ErrorReportBuilder.build_error_report(
        message=str(exc),
        exit_code=ErrorCodes.INVALID_ARGUMENT.value,
        error_type="io_error",
    )
    _emit(report)
    return report["exit_code"]


def linalg_error_handler(command: str, exc: np.linalg.LinAlgError) -> int:
    logger.error(f"{command} hit a linear-algebra failure: {exc}")
    report = ErrorReportBuilder.build_error_report(
        message=ErrorMessages.System.NUMERICAL_ERROR,
        exit_code=ErrorCodes.NUMERICAL_ERROR.value,
        error_type="numerical_error",
        details={"original_error": str(exc)},
    )
    _emit(report)
    return report["exit_code"]


def generic_exception_handler(command: str, exc: Exception) -> int:
    logger.error(f"Unhandled exception in {command}: {exc}", exc_info=True, extra={
        "exception_type": exc.__class__.__name__,
    })
    report = ErrorReportBuilder.build_error_report(
        message=ErrorMessages.System.INTERNAL_ERROR,
        exit_code=ErrorCodes.INTERNAL_ERROR.value,
        error_type="internal_error",
        details={"exception_type": exc.__class__.__name__},
    )
    _emit(report)
    return report["exit_code"]


def handle_command_errors(func: Callable[..., int]) -> Callable[..., int]:
    """Wrap a command so that every failure maps to its exit code."""

    command = func.__module__.rsplit(".", 1)[-1]

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> int:
        try:
            return func(*args, **kwargs)
        except BaseAppException as exc:
            return app_exception_handler(command, exc)
        except PydanticValidationError as exc:
            return validation_exception_handler(command, exc)
        except np.linalg.LinAlgError as exc:
            return linalg_error_handler(command, exc)
        except OSError as exc:
            return os_error_handler(command, exc)
        except Exception as exc:  # noqa: BLE001
            return generic_exception_handler(command, exc)

    return wrapper
