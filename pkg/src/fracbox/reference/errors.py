"""Error types for reference solutions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass
class ReferenceSolutionError(Exception):
    message: str
    code: str = "REFERENCE_ERROR"
    details: Any | None = None

    def __str__(self) -> str:  # pragma: no cover - trivial
        return self.message


class ReferenceValidationError(ReferenceSolutionError):
    def __init__(self, message: str, field: str | None = None, value: Any | None = None) -> None:
        super().__init__(message, code="VALIDATION_ERROR", details={"field": field, "value": value})
        self.field = field
        self.value = value


class MemoryGuardError(ReferenceSolutionError):
    def __init__(self, message: str, unknowns: int | None = None, limit: int | None = None) -> None:
        super().__init__(message, code="MEMORY_GUARD", details={"unknowns": unknowns, "limit": limit})
        self.unknowns = unknowns
        self.limit = limit


def format_error_for_user(error: Exception) -> str:
    if isinstance(error, ReferenceValidationError):
        return f"Validation Error: {error.message}"
    if isinstance(error, MemoryGuardError):
        return f"Memory Guard: {error.message}"
    return f"Error: {str(error)}"
