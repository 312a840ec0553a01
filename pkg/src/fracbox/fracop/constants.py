"""Constants for fractional operators."""

from __future__ import annotations

DEFAULTS = {
    "CONTOUR": {"n_line": 200, "n_circle": 64, "r_factor": 0.5, "R_factor": 2.0},
    "SINC": {"k": 0.2, "max_nodes": 5000},
}

METHODS = {"eig", "contour", "sinc"}

# below this size extremal eigenvalues come from the dense solver
DENSE_EXTREMAL_LIMIT = 400
EXTREMAL_TOL = 1e-8

SYMMETRY_RTOL = 1e-10
