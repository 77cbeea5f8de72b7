"""
Runtime configuration.

Values come from the process environment, optionally seeded from a .env file in
the working directory. CLI flags take precedence over anything read here.
"""

import os
from functools import lru_cache

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

from .errors import ConfigError

# Load environment variables
load_dotenv()


class Settings(BaseModel):
    """Environment-derived settings shared by the CLI and the experiment harness."""

    threads: int = Field(ge=1)
    log_level: str = "WARNING"
    c_edf: int = Field(default=16, ge=1)
    c_sjf: int = Field(default=8, ge=1)
    c_cms: int = Field(default=8, ge=1)


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from None


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Read settings once per process."""
    try:
        return Settings(
            threads=_env_int("MACHMIN_THREADS", os.cpu_count() or 1),
            log_level=os.getenv("MACHMIN_LOG_LEVEL", "WARNING").upper(),
            c_edf=_env_int("MACHMIN_C_EDF", 16),
            c_sjf=_env_int("MACHMIN_C_SJF", 8),
            c_cms=_env_int("MACHMIN_C_CMS", 8),
        )
    except ValidationError as e:
        raise ConfigError(f"Invalid MACHMIN_* environment: {e}") from e
