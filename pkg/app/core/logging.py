"""
Logging setup shared by every command.

Modules log through ``logging.getLogger(__name__)`` and pass structured
context in ``extra``; this module only wires the root handler once.
"""

import logging
import sys
from typing import Optional

from app.core.config import settings


class ContextFormatter(logging.Formatter):
    """Formatter that appends the ``extra`` context of a record as key=value pairs."""

    _STANDARD = set(logging.LogRecord("", 0, "", 0, "", (), None).__dict__) | {"message", "asctime"}

    def format(self, record: logging.LogRecord) -> str:
        base = super().format(record)
        context = {
            key: value for key, value in record.__dict__.items()
            if key not in self._STANDARD and not key.startswith("_")
        }
        if not context:
            return base
        rendered = " ".join(f"{key}={value}" for key, value in sorted(context.items()))
        return f"{base} [{rendered}]"


def setup_logging(level: Optional[str] = None, fmt: Optional[str] = None) -> None:
    """Configure the root logger from settings (idempotent)."""
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_mfdh_handler", False):
            root.removeHandler(handler)

    if settings.LOG_FILE:
        handler: logging.Handler = logging.FileHandler(settings.LOG_FILE, encoding="utf-8")
    else:
        handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(ContextFormatter(fmt or settings.LOG_FORMAT))
    handler._mfdh_handler = True  # type: ignore[attr-defined]

    root.addHandler(handler)
    root.setLevel(level or ("DEBUG" if settings.DEBUG else settings.LOG_LEVEL))
