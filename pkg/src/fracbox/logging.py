"""Logger factory for the ``fracbox`` namespace."""

from __future__ import annotations

import logging
import sys

ROOT_LOGGER_NAME = "fracbox"
LOG_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"

_handler: logging.Handler | None = None


def get_logger(name: str) -> logging.Logger:
    """Return a logger below the package root, installing the stderr handler once."""
    _ensure_handler()
    if name == ROOT_LOGGER_NAME or name.startswith(f"{ROOT_LOGGER_NAME}."):
        return logging.getLogger(name)
    return logging.getLogger(f"{ROOT_LOGGER_NAME}.{name}")


def set_level(level: int | str) -> None:
    _ensure_handler()
    logging.getLogger(ROOT_LOGGER_NAME).setLevel(level)


def _ensure_handler() -> None:
    global _handler
    if _handler is not None:
        return

    from .config import load_config

    root = logging.getLogger(ROOT_LOGGER_NAME)
    _handler = logging.StreamHandler(sys.stderr)
    _handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt="%H:%M:%S"))
    root.addHandler(_handler)
    root.setLevel(load_config().log_level)
    root.propagate = False
