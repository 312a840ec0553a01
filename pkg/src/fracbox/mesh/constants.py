"""Constants for mesh construction."""

from __future__ import annotations

SUPPORTED_DIMS = {1, 2}
REFERENCE_DIMS = {1, 2, 3}

MIN_CELLS = 2

# relative tolerances for the partition and flux identities
PARTITION_RTOL = 1e-12
FLUX_RTOL = 1e-13

MESH_SPECS = {"interval", "square", "file"}
