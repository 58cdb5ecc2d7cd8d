"""
Loading of the declarative JSON run configuration.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from app.errors import ConfigError, ErrorMessages
from app.schemas.config import RunConfig

logger = logging.getLogger(__name__)


def load_run_config(path: Path, overrides: Optional[Dict[str, Any]] = None) -> Tuple[RunConfig, str]:
    """
    Validate a run configuration before any computation.

    Relative paths are resolved against the config file's directory and
    every input path must exist. Returns the config and its raw text.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(ErrorMessages.Config.UNREADABLE.format(path=path), str(path), [str(exc)]) from exc
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(ErrorMessages.Config.INVALID_CONFIG, str(path), [str(exc)]) from exc

    config = RunConfig.model_validate(payload).with_overrides(overrides or {})
    config = config.model_copy(update={"paths": config.paths.resolved(path.parent)})
    missing = config.paths.check_inputs()
    if missing:
        raise ConfigError(ErrorMessages.Config.MISSING_PATH.format(path=missing[0]), str(path), missing)

    logger.info("Configuration loaded", extra={"path": str(path), "seed": config.seed})
    return config, text
