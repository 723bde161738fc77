"""
Runtime settings read from the environment.

A `.env` file in the working directory is loaded first, so the variables below can be set
either way:

    - **PO_THREADS**: Caps the number of worker threads used by scans. Unset means the executor default.
    - **PO_LOG_LEVEL**: Default logging level when no `-v` flag is given.
    - **PO_DEPTH_LIMIT**: Deepest Cantor generation that may be materialized.
"""



import logging
import os

from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv

from .errors import InputError



load_dotenv()

VERSION = "0.1.0"
DEFAULT_DEPTH_LIMIT = 26


@dataclass(frozen=True)
class Settings:
    """Environment-derived settings.

    Attributes:
        threads (int|None): Maximum worker threads, or None for the executor default.
        log_level (str): Name of the default logging level.
        depth_limit (int): Deepest allowed Cantor generation.
    """
    threads: Optional[int] = None
    log_level: str = "WARNING"
    depth_limit: int = DEFAULT_DEPTH_LIMIT

    @classmethod
    def from_env(cls):
        """Builds the settings from `os.environ`.

        Raises:
            InputError: If a variable is set to a value of the wrong kind.
        """
        threads = _positive_int("PO_THREADS", os.environ.get("PO_THREADS"))
        depth_limit = _positive_int("PO_DEPTH_LIMIT", os.environ.get("PO_DEPTH_LIMIT"))
        log_level = os.environ.get("PO_LOG_LEVEL", "WARNING").upper()
        if not isinstance(logging.getLevelName(log_level), int):
            raise InputError(f"PO_LOG_LEVEL is not a logging level: {log_level}")

        return cls(
            threads=threads,
            log_level=log_level,
            depth_limit=depth_limit if depth_limit is not None else DEFAULT_DEPTH_LIMIT)


def _positive_int(name: str, raw: Optional[str]):
    if raw is None or raw.strip() == "":
        return None
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"{name} must be a positive integer, got: {raw!r}") from None
    if value < 1:
        raise InputError(f"{name} must be a positive integer, got: {value}")

    return value


def get_settings():
    """Returns the settings for the current environment."""
    return Settings.from_env()
