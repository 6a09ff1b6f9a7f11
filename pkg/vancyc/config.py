"""Runtime settings and logging setup.

Settings are read once from the environment (``VANCYC_THREADS``,
``VANCYC_LOG_LEVEL``); CLI flags override them. Library modules only ask for
``logging.getLogger("vancyc.<module>")``; handlers are attached here.
"""

from __future__ import annotations

import logging
import os
import sys
from dataclasses import dataclass, replace
from typing import Mapping, Optional

LOGGER_NAME = "vancyc"
LOG_FORMAT = "%(asctime)s %(levelname)s %(message)s"
DEFAULT_LOG_LEVEL = "WARNING"
MAX_DOUBLINGS = 2


def default_precision(mu: int, n_vars: int) -> int:
    """Default truncation order of the t-action series."""

    return 2 * (mu + n_vars + 2)


def _env_int(env: Mapping[str, str], key: str, default: int) -> int:
    raw = env.get(key, "").strip()
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        return default
    return max(1, value)


@dataclass(frozen=True)
class Settings:
    """Engine-wide knobs that are not part of a problem."""

    threads: int = 1
    log_level: str = DEFAULT_LOG_LEVEL
    max_doublings: int = MAX_DOUBLINGS

    @classmethod
    def from_env(cls, env: Optional[Mapping[str, str]] = None) -> "Settings":
        env = os.environ if env is None else env
        level = env.get("VANCYC_LOG_LEVEL", DEFAULT_LOG_LEVEL).strip().upper() or DEFAULT_LOG_LEVEL
        return cls(threads=_env_int(env, "VANCYC_THREADS", 1), log_level=level)

    def with_overrides(self, **changes: object) -> "Settings":
        clean = {key: value for key, value in changes.items() if value is not None}
        return replace(self, **clean)


def configure_logging(level: str = DEFAULT_LOG_LEVEL) -> logging.Logger:
    """Attach a stderr handler to the ``vancyc`` logger (once) and set its level."""

    logger = logging.getLogger(LOGGER_NAME)
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(handler)
        logger.propagate = False
    logger.setLevel(getattr(logging, level.upper(), logging.WARNING))
    return logger


__all__ = ["Settings", "configure_logging", "default_precision", "LOGGER_NAME"]
