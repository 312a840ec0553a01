"""Validation helpers for meshes and mesh selectors."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .constants import MESH_SPECS, PARTITION_RTOL, SUPPORTED_DIMS
from .errors import GeometryError, MeshValidationError
from .mesh import Mesh


@dataclass(frozen=True)
class MeshSpec:
    kind: str
    size: int | None = None
    path: Path | None = None


def validate_mesh(mesh: Mesh) -> Mesh:
    if mesh.dim not in SUPPORTED_DIMS:
        raise MeshValidationError(f"Unsupported mesh dimension {mesh.dim}", field="dim", value=mesh.dim)
    if mesh.vertices.shape[1] != mesh.dim:
        raise MeshValidationError(
            f"Vertex coordinates have {mesh.vertices.shape[1]} components, expected {mesh.dim}",
            field="vertices",
        )
    if mesh.elements.ndim != 2 or mesh.elements.shape[1] != mesh.dim + 1:
        raise MeshValidationError(f"Elements must list {mesh.dim + 1} vertex indices", field="elements")

    elements = mesh.elements
    if elements.size and (elements.min() < 0 or elements.max() >= mesh.n_vertices):
        raise MeshValidationError("Element vertex index out of range", field="elements")
    ordered = np.sort(elements, axis=1)
    repeated = np.flatnonzero(np.any(ordered[:, 1:] == ordered[:, :-1], axis=1))
    if repeated.size:
        raise MeshValidationError(
            f"Element {int(repeated[0])} repeats a vertex index", field="elements", value=int(repeated[0])
        )
    for vertex in mesh.boundary_vertices:
        if not 0 <= vertex < mesh.n_vertices:
            raise MeshValidationError("Boundary vertex index out of range", field="boundary_vertices", value=vertex)

    measures = mesh.signed_measures
    bad = np.flatnonzero(measures <= 0.0)
    if bad.size:
        element = int(bad[0])
        raise GeometryError(
            f"Element {element} has non-positive signed measure {measures[element]:.3e}", element=element
        )

    if mesh.dim == 2:
        _validate_conforming(mesh)
    return mesh


def _validate_conforming(mesh: Mesh) -> None:
    edges = Counter()
    for tri in mesh.elements:
        for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
            edges[(min(a, b), max(a, b))] += 1
    shared_too_often = [edge for edge, count in edges.items() if count > 2]
    if shared_too_often:
        raise MeshValidationError(
            f"Edge {shared_too_often[0]} is shared by more than two triangles", field="elements"
        )

    try:
        hull = ConvexHull(mesh.vertices)
    except QhullError as exc:
        raise GeometryError(f"Vertex set spans no area: {exc}") from exc
    if not np.isclose(hull.volume, mesh.domain_measure, rtol=PARTITION_RTOL * 100, atol=0.0):
        raise MeshValidationError(
            f"Triangles cover {mesh.domain_measure:.12g} but the convex hull has area {hull.volume:.12g}",
            field="elements",
        )

    scale = float(np.max(np.abs(mesh.vertices))) or 1.0
    normals, offsets = hull.equations[:, :2], hull.equations[:, 2]
    for (a, b), count in edges.items():
        if count != 1:
            continue
        on_facet = (np.abs(mesh.vertices[[a, b]] @ normals.T + offsets) <= 1e-10 * scale).all(axis=0)
        if not on_facet.any():
            raise MeshValidationError(
                f"Edge ({a}, {b}) belongs to a single triangle but is not on the domain boundary",
                field="elements",
            )


def parse_mesh_spec(value: str) -> MeshSpec:
    """Parse selectors like ``interval:16``, ``square:8`` or ``file:PATH``."""
    kind, sep, arg = value.partition(":")
    kind = kind.strip().lower()
    if not sep or kind not in MESH_SPECS:
        raise MeshValidationError(
            f"Invalid mesh selector '{value}'. Use interval:N, square:N or file:PATH",
            field="mesh",
            value=value,
        )
    if kind == "file":
        path = Path(arg).expanduser()
        if not path.is_file():
            raise MeshValidationError(f"Mesh file not found: {path}", field="mesh", value=value)
        return MeshSpec(kind=kind, path=path)
    try:
        size = int(arg)
    except ValueError as exc:
        raise MeshValidationError(f"Mesh size must be an integer in '{value}'", field="mesh", value=value) from exc
    return MeshSpec(kind=kind, size=size)
