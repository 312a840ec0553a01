"""Process-wide numeric settings loaded from the environment."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any

DEFAULTS = {
    "DENSE_LIMIT": 20000,
    "QUAD_RTOL": 1e-10,
    "SINGULAR_RTOL": 1e-9,
    "COEFF_ATOL": 1e-11,
    "LOG_LEVEL": "WARNING",
}

LOG_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}


@dataclass
class ConfigError(Exception):
    """An environment variable holds a value that cannot be used."""

    message: str
    code: str = "CONFIG_ERROR"
    details: Any | None = None

    def __str__(self) -> str:  # pragma: no cover - trivial
        return self.message

    @property
    def variable(self) -> str | None:
        return (self.details or {}).get("variable")


def _invalid(variable: str, value: str, reason: str) -> ConfigError:
    return ConfigError(f"{variable}={value!r}: {reason}", details={"variable": variable, "value": value})


def format_error_for_user(error: Exception) -> str:
    if isinstance(error, ConfigError):
        return f"Configuration Error: {error.message}"
    return f"Error: {str(error)}"


@dataclass(frozen=True)
class SolverConfig:
    dense_limit: int
    quad_rtol: float
    singular_rtol: float
    coeff_atol: float
    cache_dir: Path
    log_level: int


def default_cache_dir() -> Path:
    base = Path(os.getenv("XDG_CACHE_HOME", Path.home() / ".cache"))
    return base / "fracbox"


def load_config() -> SolverConfig:
    dense_limit = _env_int("FRACBOX_DENSE_LIMIT", DEFAULTS["DENSE_LIMIT"])
    if dense_limit < 1:
        raise _invalid("FRACBOX_DENSE_LIMIT", str(dense_limit), "must be >= 1")

    quad_rtol = _env_positive_float("FRACBOX_QUAD_RTOL", DEFAULTS["QUAD_RTOL"])
    singular_rtol = _env_positive_float("FRACBOX_SINGULAR_RTOL", DEFAULTS["SINGULAR_RTOL"])
    coeff_atol = _env_positive_float("FRACBOX_COEFF_ATOL", DEFAULTS["COEFF_ATOL"])

    cache_dir = os.getenv("FRACBOX_CACHE_DIR")
    level_name = os.getenv("FRACBOX_LOG_LEVEL", DEFAULTS["LOG_LEVEL"]).upper()
    if level_name not in LOG_LEVELS:
        raise _invalid("FRACBOX_LOG_LEVEL", level_name, f"expected one of {', '.join(sorted(LOG_LEVELS))}")

    return SolverConfig(
        dense_limit=dense_limit,
        quad_rtol=quad_rtol,
        singular_rtol=singular_rtol,
        coeff_atol=coeff_atol,
        cache_dir=Path(cache_dir) if cache_dir else default_cache_dir(),
        log_level=logging.getLevelName(level_name),
    )


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise _invalid(name, raw, "not an integer") from exc


def _env_positive_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None:
        return default
    try:
        value = float(raw)
    except ValueError as exc:
        raise _invalid(name, raw, "not a number") from exc
    if not value > 0:
        raise _invalid(name, raw, "must be > 0")
    return value
