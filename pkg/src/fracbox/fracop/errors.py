"""Error types for fractional operators."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass
class FracOpError(Exception):
    message: str
    code: str = "FRACOP_ERROR"
    details: Any | None = None

    def __str__(self) -> str:  # pragma: no cover - trivial
        return self.message


class FracOpValidationError(FracOpError):
    def __init__(self, message: str, field: str | None = None, value: Any | None = None) -> None:
        super().__init__(message, code="VALIDATION_ERROR", details={"field": field, "value": value})
        self.field = field
        self.value = value


class SpectralBracketError(FracOpError):
    def __init__(self, message: str, bracket: tuple[float, float] | None = None, spectrum: tuple[float, float] | None = None) -> None:
        super().__init__(message, code="BRACKET_ERROR", details={"bracket": bracket, "spectrum": spectrum})
        self.bracket = bracket
        self.spectrum = spectrum


class FactorizationError(FracOpError):
    def __init__(self, message: str, details: Any | None = None) -> None:
        super().__init__(message, code="FACTORIZATION_ERROR", details=details)


class SolverError(FracOpError):
    def __init__(self, message: str, shift: complex | None = None) -> None:
        super().__init__(message, code="SOLVER_ERROR", details={"shift": shift})
        self.shift = shift


def format_error_for_user(error: Exception) -> str:
    if isinstance(error, FracOpValidationError):
        return f"Validation Error: {error.message}"
    if isinstance(error, SpectralBracketError):
        return f"Spectral Bracket Error: {error.message}"
    if isinstance(error, FactorizationError):
        return f"Factorization Error: {error.message}"
    if isinstance(error, SolverError):
        return f"Solver Error: {error.message}"
    return f"Error: {str(error)}"
