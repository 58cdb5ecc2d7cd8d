import logging
from typing import Optional

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    APP_NAME: str = "MFDH Retrieval"
    ENVIRONMENT: str = "development"
    DEBUG: bool = False

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "%(asctime)s %(levelname)s %(name)s: %(message)s"
    LOG_FILE: Optional[str] = None

    # Numerical defaults shared by the modules
    DEFAULT_SEED: int = 0
    EPS_SPD: float = 1e-6
    RIDGE_FALLBACK: float = 1e-8
    MAX_ANCHORS_PER_VIEW: int = 500

    @field_validator("LOG_LEVEL", mode="before")
    @classmethod
    def normalize_log_level(cls, v: str) -> str:
        level = str(v).strip().upper()
        # logging.getLevelNamesMapping() is 3.11+; _nameToLevel is the same mapping on 3.10
        names = getattr(logging, "getLevelNamesMapping", lambda: dict(logging._nameToLevel))()
        if level not in names:
            raise ValueError(f"Invalid log level: {v}")
        return level

    @field_validator("EPS_SPD", "RIDGE_FALLBACK")
    @classmethod
    def non_negative(cls, v: float) -> float:
        if v < 0:
            raise ValueError("must be non-negative")
        return v

    model_config = SettingsConfigDict(
        case_sensitive=True,
        env_file=".env",
        env_prefix="MFDH_",
        extra="ignore",
    )


settings = Settings()
