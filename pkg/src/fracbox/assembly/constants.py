"""Constants for assembly and quadrature."""

from __future__ import annotations

# absolute quadrature tolerance per unit measure
QUAD_ATOL = 1e-13

ADAPT_MAX_DEPTH = 14
ADAPT_CHUNK = 20000
GRADED_MAX_BISECTIONS = 200
QUAD_LIMIT = 200

INTERVAL_GAUSS_POINTS = 5

# relative symmetry / ellipticity tolerances for sampled coefficients
SYMMETRY_RTOL = 1e-12

BILINEAR_FORMS = {
    "exact-galerkin": "EXACT_GALERKIN",
    "box-averaged": "BOX_AVERAGED",
    "q-quadrature": "Q_QUADRATURE",
}

INNER_PRODUCTS = {"exact", "mixed", "lumped", "banded"}
INNER_PRODUCT_ALIASES = {"exactl2": "exact", "l2": "exact", "exact-l2": "exact"}
