"""Barycentric dual cells, interface normals and the transfer operator Q."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..logging import get_logger
from .constants import FLUX_RTOL, REFERENCE_DIMS
from .errors import GeometryError, MeshValidationError
from .mesh import Mesh, signed_measures

log = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class DualCells:
    """Dual-cell geometry of a mesh.

    ``cell_volume`` covers every vertex so the cells partition the domain;
    assembly only reads the active entries.
    """

    cell_volume: np.ndarray
    subregion_volume: np.ndarray
    interface_normals: np.ndarray
    gradients: np.ndarray
    element_measure: np.ndarray
    barycenters: np.ndarray
    active_vertices: np.ndarray

    @property
    def active_cell_volume(self) -> np.ndarray:
        return self.cell_volume[self.active_vertices]

    def partition_defect(self, domain_measure: float) -> float:
        return abs(float(np.sum(self.cell_volume)) - domain_measure) / domain_measure


@dataclass(frozen=True)
class DualField:
    """Piecewise constant function on the dual cells of the active vertices."""

    values: np.ndarray
    volumes: np.ndarray

    def inner(self, other: DualField) -> float:
        if other.values.shape != self.values.shape:
            raise MeshValidationError("Dual fields live on different cell sets", field="values")
        return float(np.sum(self.values * other.values * self.volumes))

    def norm(self) -> float:
        return float(np.sqrt(self.inner(self)))

    def integral(self) -> float:
        return float(np.sum(self.values * self.volumes))

    def nodal(self) -> np.ndarray:
        """Inverse transfer: the nodal vector whose Q-image is this field."""
        return self.values.copy()


@dataclass
class FluxCheck:
    dim: int
    passed: bool
    max_defect: float
    details: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.passed


def barycentric_gradients(coords: np.ndarray) -> np.ndarray:
    """Gradients of the barycentric coordinates, shape ``(m, d + 1, d)``."""
    edges = coords[:, 1:, :] - coords[:, :1, :]
    inverse = np.linalg.inv(edges)
    grads = np.empty_like(coords)
    grads[:, 1:, :] = np.transpose(inverse, (0, 2, 1))
    grads[:, 0, :] = -np.sum(grads[:, 1:, :], axis=1)
    return grads


def interface_normals(coords: np.ndarray) -> np.ndarray:
    """Integrated outward normals of the interfaces Gamma_{z,K}.

    Entry ``[k, z]`` is the normal of the part of the dual-cell boundary of
    local vertex ``z`` that lies inside element ``k``. Exact polygonal
    geometry; elements must be positively oriented.
    """
    d = coords.shape[-1]
    if d == 1:
        normals = np.empty_like(coords)
        direction = np.sign(coords[:, 1, 0] - coords[:, 0, 0])
        normals[:, 0, 0] = direction
        normals[:, 1, 0] = -direction
        return normals
    if d == 2:
        centroid = coords.mean(axis=1)
        normals = np.empty_like(coords)
        for z in range(3):
            a, b = (z + 1) % 3, (z + 2) % 3
            mid_a = 0.5 * (coords[:, z] + coords[:, a])
            mid_b = 0.5 * (coords[:, z] + coords[:, b])
            normals[:, z] = _segment_normal(mid_a, centroid) + _segment_normal(centroid, mid_b)
        return normals
    if d == 3:
        return np.stack([_tetra_interface_normal(tet) for tet in coords])
    raise MeshValidationError(f"Unsupported dimension {d}", field="dim", value=d)


def tetra_area_vectors(tet: np.ndarray, z: int) -> list[np.ndarray]:
    """Area vectors of the quadrilaterals bounding the dual region of vertex ``z``."""
    centroid = tet.mean(axis=0)
    others = [v for v in range(4) if v != z]
    vectors = []
    for v in others:
        rest = [w for w in others if w != v]
        mid = 0.5 * (tet[z] + tet[v])
        face_1 = (tet[z] + tet[v] + tet[rest[0]]) / 3.0
        face_2 = (tet[z] + tet[v] + tet[rest[1]]) / 3.0
        area = 0.5 * np.cross(centroid - mid, face_2 - face_1)
        if np.dot(area, mid - tet[z]) < 0:
            area = -area
        vectors.append(area)
    return vectors


def build_dual_cells(mesh: Mesh) -> DualCells:
    coords = mesh.element_coordinates
    measures = signed_measures(coords)
    degenerate = np.flatnonzero(measures <= 0.0)
    if degenerate.size:
        element = int(degenerate[0])
        raise GeometryError(f"Element {element} is degenerate (measure {measures[element]:.3e})", element=element)

    d = mesh.dim
    subregion = np.repeat((measures / (d + 1))[:, None], d + 1, axis=1)
    cell_volume = np.zeros(mesh.n_vertices)
    np.add.at(cell_volume, mesh.elements, subregion)

    dual = DualCells(
        cell_volume=cell_volume,
        subregion_volume=subregion,
        interface_normals=interface_normals(coords),
        gradients=barycentric_gradients(coords),
        element_measure=measures,
        barycenters=coords.mean(axis=1),
        active_vertices=mesh.active_vertices,
    )
    for array in (dual.cell_volume, dual.subregion_volume, dual.interface_normals, dual.gradients):
        array.setflags(write=False)
    log.debug(
        "dual cells: %d vertices, partition defect %.2e",
        mesh.n_vertices,
        dual.partition_defect(float(np.sum(measures))),
    )
    return dual


def flux_defect(coords: np.ndarray, fields: np.ndarray | None = None) -> float:
    """Largest relative mismatch of  -int_Gamma p.eta  against  |K| p.grad(phi_z)."""
    d = coords.shape[-1]
    fields = np.eye(d) if fields is None else np.atleast_2d(fields)
    normals = interface_normals(coords)
    grads = barycentric_gradients(coords)
    measures = signed_measures(coords)
    lhs = -np.einsum("kzd,pd->kzp", normals, fields)
    rhs = measures[:, None, None] * np.einsum("kzd,pd->kzp", grads, fields)
    scale = max(float(np.max(np.abs(rhs))), np.finfo(float).tiny)
    return float(np.max(np.abs(lhs - rhs)) / scale)


def reference_simplex_flux_check(dim: int) -> FluxCheck:
    if dim not in REFERENCE_DIMS:
        raise MeshValidationError(f"dim must be one of {sorted(REFERENCE_DIMS)}", field="dim", value=dim)
    simplex = np.vstack([np.zeros(dim), np.eye(dim)])[None, :, :]
    defect = flux_defect(simplex)
    details = []
    passed = defect <= FLUX_RTOL
    if not passed:
        details.append(f"flux identity defect {defect:.3e} exceeds {FLUX_RTOL:.0e}")

    normals = interface_normals(simplex)[0]
    if dim == 1:
        if normals[0, 0] != 1.0:
            passed = False
            details.append(f"left endpoint normal is {normals[0, 0]}, expected +1")
    elif dim == 2:
        if not np.allclose(normals[0], [0.5, 0.5], rtol=0.0, atol=FLUX_RTOL):
            passed = False
            details.append(f"origin interface normal is {normals[0].tolist()}, expected (1/2, 1/2)")
    else:
        expected = {tuple(np.roll([1 / 12, 1 / 24, 1 / 24], k)) for k in range(3)}
        for vector in tetra_area_vectors(simplex[0], 0):
            if not any(np.allclose(vector, e, rtol=0.0, atol=FLUX_RTOL) for e in expected):
                passed = False
                details.append(f"quadrilateral area vector {vector.tolist()} is not a permutation of (1/12, 1/24, 1/24)")
        if not np.allclose(normals[0], [1 / 6] * 3, rtol=0.0, atol=FLUX_RTOL):
            passed = False
            details.append(f"area vectors sum to {normals[0].tolist()}, expected (1/6, 1/6, 1/6)")

    if not passed:
        log.warning("reference flux check failed in %dD: %s", dim, "; ".join(details))
    return FluxCheck(dim=dim, passed=passed, max_defect=defect, details=details)


def transfer_Q(mesh: Mesh, dual: DualCells, nodal_values: np.ndarray) -> DualField:
    values = np.asarray(nodal_values, dtype=float)
    if values.shape != (mesh.n_active,):
        raise MeshValidationError(
            f"Expected {mesh.n_active} nodal values, got {values.shape[0] if values.ndim else 0}",
            field="nodal_values",
            value=values.shape,
        )
    return DualField(values=values.copy(), volumes=dual.active_cell_volume.copy())


def _segment_normal(start: np.ndarray, end: np.ndarray) -> np.ndarray:
    delta = end - start
    return np.column_stack([delta[:, 1], -delta[:, 0]])


def _tetra_interface_normal(tet: np.ndarray) -> np.ndarray:
    return np.stack([np.sum(tetra_area_vectors(tet, z), axis=0) for z in range(4)])


def locate_dual_cells(mesh: Mesh, points: np.ndarray, chunk: int = 2048) -> np.ndarray:
    """Vertex whose dual cell contains each point.

    Inside an element the dual region of vertex z is where the barycentric
    coordinate of z is the largest one.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    coords = mesh.element_coordinates
    grads = barycentric_gradients(coords)
    origin = coords[:, 0, :]
    owners = np.full(points.shape[0], -1, dtype=np.int64)
    for start in range(0, points.shape[0], chunk):
        block = points[start : start + chunk]
        offset = block[:, None, :] - origin[None, :, :]
        lam = np.einsum("mjd,pmd->pmj", grads, offset)
        lam[:, :, 0] += 1.0
        inside = lam.min(axis=2) >= -1e-12
        found = inside.any(axis=1)
        element = np.argmax(inside, axis=1)
        local = np.argmax(lam[np.arange(block.shape[0]), element], axis=1)
        vertex = mesh.elements[element, local]
        owners[start : start + chunk] = np.where(found, vertex, -1)
    missing = np.flatnonzero(owners < 0)
    if missing.size:
        point = points[missing[0]].tolist()
        raise MeshValidationError(f"Point {point} lies outside the mesh", field="points", value=point)
    return owners
