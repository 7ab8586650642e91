"""
Runtime settings.
Loads DUALGRAPH_* values from a .env file at the project root if available,
then from the process environment. Settings only affect diagnostics on
standard error and the lifting safety bound, never report content.
"""
from functools import lru_cache
from pathlib import Path
from typing import Dict, Optional
import logging
import os

from pydantic import BaseModel, ValidationError, field_validator

from dualgraph.errors import ConfigError

PROJECT_ROOT = Path(__file__).resolve().parent.parent
ENV_PREFIX = "DUALGRAPH_"


class Settings(BaseModel):
    """Settings read from DUALGRAPH_LOG_LEVEL, DUALGRAPH_LOG_FORMAT, DUALGRAPH_LIFT_STEP_LIMIT"""
    log_level: str = "WARNING"
    log_format: str = "%(levelname)s %(name)s: %(message)s"
    lift_step_limit: int = 1_000_000

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        value = value.strip().upper()
        if not isinstance(logging.getLevelName(value), int):
            raise ValueError(f"unknown log level {value!r}")
        return value

    @field_validator("lift_step_limit")
    @classmethod
    def _positive_limit(cls, value: int) -> int:
        if value <= 0:
            raise ValueError("lift step limit must be positive")
        return value


def _read_env_file(env_path: Path) -> Dict[str, Optional[str]]:
    # python-dotenv not installed: fall back to the process environment only
    try:
        from dotenv import dotenv_values
    except ImportError:
        return {}
    if not env_path.exists():
        return {}
    return dict(dotenv_values(env_path))


def load_settings(env_path: Optional[Path] = None, environ: Optional[Dict[str, str]] = None) -> Settings:
    values: Dict[str, Optional[str]] = {}
    values.update(_read_env_file(env_path or PROJECT_ROOT / ".env"))
    values.update({k: v for k, v in (os.environ if environ is None else environ).items()
                   if k.startswith(ENV_PREFIX)})
    fields = {}
    for name in Settings.model_fields:
        raw = values.get(ENV_PREFIX + name.upper())
        if raw is not None and raw.strip():
            fields[name] = raw.strip()
    try:
        return Settings(**fields)
    except ValidationError as e:
        first = e.errors()[0]
        field = ENV_PREFIX + str(first["loc"][0]).upper() if first["loc"] else ENV_PREFIX
        raise ConfigError(f"invalid setting {field}: {first['msg']}") from e


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return load_settings()


def configure_logging(settings: Settings):
    """Send diagnostics to standard error at the configured level"""
    logging.basicConfig(level=settings.log_level, format=settings.log_format)
    logging.getLogger("dualgraph").setLevel(settings.log_level)
