"""Reference solutions and error norms for the benchmark problems."""

from .cache import CoefficientCache
from .errors import MemoryGuardError, ReferenceSolutionError, ReferenceValidationError, format_error_for_user
from .loads import LOADS, checkerboard, checkerboard_load, constant_one, indicator_load, select_load, singular_load
from .norms import full_values, l2_error, series_error
from .overkill import OverkillReference, evaluate_structured, overkill_solve, structured_mesh
from .series import (
    SeriesSolution,
    indicator_series,
    indicator_solution,
    sine_moments,
    singular_series,
    singular_solution,
)

__all__ = [
    "LOADS",
    "CoefficientCache",
    "MemoryGuardError",
    "OverkillReference",
    "ReferenceSolutionError",
    "ReferenceValidationError",
    "SeriesSolution",
    "checkerboard",
    "checkerboard_load",
    "constant_one",
    "evaluate_structured",
    "format_error_for_user",
    "full_values",
    "indicator_load",
    "indicator_series",
    "indicator_solution",
    "l2_error",
    "overkill_solve",
    "select_load",
    "series_error",
    "sine_moments",
    "singular_load",
    "singular_series",
    "singular_solution",
    "structured_mesh",
]
