"""Error types for operator assembly."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass
class AssemblyError(Exception):
    message: str
    code: str = "ASSEMBLY_ERROR"
    details: Any | None = None

    def __str__(self) -> str:  # pragma: no cover - trivial
        return self.message


class AssemblyValidationError(AssemblyError):
    def __init__(self, message: str, field: str | None = None, value: Any | None = None) -> None:
        super().__init__(message, code="VALIDATION_ERROR", details={"field": field, "value": value})
        self.field = field
        self.value = value


class CoefficientError(AssemblyError):
    def __init__(self, message: str, point: Any | None = None) -> None:
        super().__init__(message, code="COEFFICIENT_ERROR", details={"point": point})
        self.point = point


class IntegrationError(AssemblyError):
    def __init__(self, message: str, element: int | None = None) -> None:
        super().__init__(message, code="INTEGRATION_ERROR", details={"element": element})
        self.element = element


def format_error_for_user(error: Exception) -> str:
    if isinstance(error, AssemblyValidationError):
        return f"Validation Error: {error.message}"
    if isinstance(error, CoefficientError):
        return f"Coefficient Error: {error.message}"
    if isinstance(error, IntegrationError):
        where = f" (element {error.element})" if error.element is not None else ""
        return f"Integration Error: {error.message}{where}"
    return f"Error: {str(error)}"
