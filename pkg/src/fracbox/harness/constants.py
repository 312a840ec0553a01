"""Constants for refinement studies."""

from __future__ import annotations

DEFAULTS = {
    "LEVELS_1D": (3, 4, 5, 6, 7, 8, 9),
    "LEVELS_2D": (3, 4, 5, 6, 7),
    "OVERKILL_LEVEL": 8,
    "MAX_WORKERS": 1,
    "GUARD_DENSE_LIMIT": 600,
    "OUTPUT_DIR": "results",
}

CSV_HEADER = (
    "experiment",
    "beta",
    "inner_product",
    "load",
    "level",
    "dofs",
    "h",
    "l2_error",
    "eoc",
    "theoretical_rate",
)
CSV_FLOAT_FORMAT = "%.12g"

# method tolerance must stay below this share of the reported error
GUARD_FRACTION = 0.01
# lambda samples for the a-priori sinc bound
GUARD_GRID_POINTS = 400

EOC_TOLERANCE = 0.15
