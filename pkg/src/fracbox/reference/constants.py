"""Constants for reference solutions."""

from __future__ import annotations

DEFAULTS = {
    "INDICATOR_TERMS": 8000,
    "SINGULAR_TERMS": 2000,
    "OVERKILL_LEVEL": 8,
    "OVERKILL_MAX_UNKNOWNS": 300_000,
}

SINGULAR_EXPONENT = -0.499
KAPPA = 1.0

# points evaluated per block when summing sine series
SERIES_CHUNK = 256
QUAD_LIMIT = 500
