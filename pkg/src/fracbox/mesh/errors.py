"""Error types for mesh construction and dual geometry."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass
class MeshError(Exception):
    message: str
    code: str = "MESH_ERROR"
    details: Any | None = None

    def __str__(self) -> str:  # pragma: no cover - trivial
        return self.message


class MeshValidationError(MeshError):
    def __init__(self, message: str, field: str | None = None, value: Any | None = None) -> None:
        super().__init__(message, code="VALIDATION_ERROR", details={"field": field, "value": value})
        self.field = field
        self.value = value


class GeometryError(MeshError):
    def __init__(self, message: str, element: int | None = None) -> None:
        super().__init__(message, code="GEOMETRY_ERROR", details={"element": element})
        self.element = element


class MeshFormatError(MeshError):
    def __init__(self, message: str, line: int | None = None) -> None:
        super().__init__(message, code="FORMAT_ERROR", details={"line": line})
        self.line = line


def format_error_for_user(error: Exception) -> str:
    if isinstance(error, MeshValidationError):
        return f"Validation Error: {error.message}"
    if isinstance(error, GeometryError):
        return f"Geometry Error: {error.message}"
    if isinstance(error, MeshFormatError):
        where = f" (line {error.line})" if error.line is not None else ""
        return f"Mesh Format Error: {error.message}{where}"
    return f"Error: {str(error)}"
