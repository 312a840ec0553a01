"""Primal meshes, barycentric dual cells and the transfer operator."""

from .dual import (
    DualCells,
    DualField,
    FluxCheck,
    barycentric_gradients,
    build_dual_cells,
    flux_defect,
    interface_normals,
    locate_dual_cells,
    reference_simplex_flux_check,
    tetra_area_vectors,
    transfer_Q,
)
from .errors import GeometryError, MeshError, MeshFormatError, MeshValidationError, format_error_for_user
from .io import build_mesh, read_mesh, write_mesh
from .mesh import BoundaryCondition, Mesh, build_structured_square, build_uniform_interval, mesh_size
from .validators import MeshSpec, parse_mesh_spec, validate_mesh

__all__ = [
    "BoundaryCondition",
    "DualCells",
    "DualField",
    "FluxCheck",
    "GeometryError",
    "Mesh",
    "MeshError",
    "MeshFormatError",
    "MeshSpec",
    "MeshValidationError",
    "barycentric_gradients",
    "build_dual_cells",
    "build_mesh",
    "build_structured_square",
    "build_uniform_interval",
    "flux_defect",
    "format_error_for_user",
    "interface_normals",
    "locate_dual_cells",
    "mesh_size",
    "parse_mesh_spec",
    "read_mesh",
    "reference_simplex_flux_check",
    "tetra_area_vectors",
    "transfer_Q",
    "validate_mesh",
    "write_mesh",
]
