"""Error types for experiment runs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass
class HarnessError(Exception):
    message: str
    code: str = "HARNESS_ERROR"
    details: Any | None = None

    def __str__(self) -> str:  # pragma: no cover - trivial
        return self.message


class HarnessValidationError(HarnessError):
    def __init__(self, message: str, field: str | None = None, value: Any | None = None) -> None:
        super().__init__(message, code="VALIDATION_ERROR", details={"field": field, "value": value})
        self.field = field
        self.value = value


class ConfigFileError(HarnessError):
    def __init__(self, message: str, path: str | None = None, line: int | None = None) -> None:
        super().__init__(message, code="CONFIG_ERROR", details={"path": path, "line": line})
        self.path = path
        self.line = line


def format_error_for_user(error: Exception) -> str:
    if isinstance(error, ConfigFileError):
        where = f" ({error.path}, line {error.line})" if error.line else ""
        return f"Configuration Error: {error.message}{where}"
    if isinstance(error, HarnessValidationError):
        return f"Validation Error: {error.message}"
    return f"Error: {str(error)}"
