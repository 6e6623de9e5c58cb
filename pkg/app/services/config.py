import dataclasses
import logging
import os
import sys
from dataclasses import dataclass
from functools import lru_cache

from dotenv import load_dotenv

from app.services.errors import InputError

# Load environment variables from .env file
load_dotenv()

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{name} must be an integer, got {raw!r}")


@dataclass(frozen=True)
class Settings:
    closure_cap: int = 10_000_000
    max_points_n: int = 10
    expansion_cap: int = 5
    burnside_guard: int = 1_000_000
    dimension_cap: int = 4
    log_level: str = "INFO"
    database_url: str = "sqlite:///./secinv.db"

    def with_overrides(self, **overrides) -> "Settings":
        """Copy of these settings with the given (non-None) fields replaced"""
        return dataclasses.replace(self, **{k: v for k, v in overrides.items() if v is not None})


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Settings read from the environment (and .env), cached"""
    return Settings(
        closure_cap=_int_env("SECINV_CLOSURE_CAP", Settings.closure_cap),
        max_points_n=_int_env("SECINV_MAX_POINTS_N", Settings.max_points_n),
        expansion_cap=_int_env("SECINV_EXPANSION_CAP", Settings.expansion_cap),
        burnside_guard=_int_env("SECINV_BURNSIDE_GUARD", Settings.burnside_guard),
        dimension_cap=_int_env("SECINV_DIMENSION_CAP", Settings.dimension_cap),
        log_level=os.getenv("SECINV_LOG_LEVEL", Settings.log_level).upper(),
        database_url=os.getenv("DATABASE_URL") or Settings.database_url,
    )


def configure_logging(level: str = None) -> None:
    """Send log records to stderr; stdout is kept for payloads"""
    level = (level or get_settings().log_level).upper()
    root = logging.getLogger()
    handler = next((h for h in root.handlers if getattr(h, "_secinv", False)), None)
    if handler is None:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._secinv = True
        root.addHandler(handler)
    else:
        # sys.stderr may have been swapped since the first call
        handler.setStream(sys.stderr)
    root.setLevel(level)
