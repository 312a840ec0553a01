"""Primal simplicial meshes on intervals and the unit square."""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum
from functools import cached_property

import numpy as np

from ..logging import get_logger
from .errors import MeshValidationError

log = get_logger(__name__)


class BoundaryCondition(StrEnum):
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"

    @classmethod
    def parse(cls, value: str | BoundaryCondition) -> BoundaryCondition:
        try:
            return cls(str(value).strip().lower())
        except ValueError as exc:
            raise MeshValidationError(
                f"Unknown boundary condition '{value}'. Options: dirichlet, neumann",
                field="bc",
                value=value,
            ) from exc


@dataclass(frozen=True, eq=False)
class Mesh:
    """Conforming simplicial mesh with fixed CCW element orientation.

    ``vertices`` has shape ``(n_vertices, dim)`` and ``elements`` has shape
    ``(n_elements, dim + 1)``. Both arrays are frozen on construction.
    """

    dim: int
    vertices: np.ndarray
    elements: np.ndarray
    boundary_vertices: frozenset[int]
    bc: BoundaryCondition

    def __post_init__(self) -> None:
        vertices = np.array(self.vertices, dtype=float, copy=True)
        if vertices.ndim == 1:
            vertices = vertices.reshape(-1, 1)
        elements = np.array(self.elements, dtype=np.int64, copy=True)
        vertices.setflags(write=False)
        elements.setflags(write=False)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "boundary_vertices", frozenset(int(v) for v in self.boundary_vertices))
        object.__setattr__(self, "bc", BoundaryCondition.parse(self.bc))

    @property
    def n_vertices(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def n_elements(self) -> int:
        return int(self.elements.shape[0])

    @cached_property
    def active_vertices(self) -> np.ndarray:
        if self.bc is BoundaryCondition.NEUMANN:
            active = np.arange(self.n_vertices)
        else:
            mask = np.ones(self.n_vertices, dtype=bool)
            mask[list(self.boundary_vertices)] = False
            active = np.flatnonzero(mask)
        active.setflags(write=False)
        return active

    @property
    def n_active(self) -> int:
        return int(self.active_vertices.size)

    @cached_property
    def element_coordinates(self) -> np.ndarray:
        """Vertex coordinates per element, shape ``(n_elements, dim + 1, dim)``."""
        coords = self.vertices[self.elements]
        coords.setflags(write=False)
        return coords

    @cached_property
    def signed_measures(self) -> np.ndarray:
        return signed_measures(self.element_coordinates)

    @property
    def domain_measure(self) -> float:
        return float(np.sum(np.abs(self.signed_measures)))

    def element_diameters(self) -> np.ndarray:
        coords = self.element_coordinates
        diameters = np.zeros(self.n_elements)
        for i in range(self.dim + 1):
            for j in range(i + 1, self.dim + 1):
                lengths = np.linalg.norm(coords[:, i] - coords[:, j], axis=1)
                diameters = np.maximum(diameters, lengths)
        return diameters

    def full_nodal(self, active_values: np.ndarray) -> np.ndarray:
        """Extend active-vertex values to all vertices, zero on Dirichlet boundary."""
        values = np.asarray(active_values)
        if values.shape[0] != self.n_active:
            raise MeshValidationError(
                f"Expected {self.n_active} active values, got {values.shape[0]}",
                field="nodal_values",
                value=values.shape[0],
            )
        full = np.zeros((self.n_vertices,) + values.shape[1:], dtype=values.dtype)
        full[self.active_vertices] = values
        return full


def signed_measures(coords: np.ndarray) -> np.ndarray:
    """Signed simplex measures for coordinates of shape ``(m, d + 1, d)``."""
    d = coords.shape[-1]
    edges = coords[:, 1:, :] - coords[:, :1, :]
    return np.linalg.det(edges) / _factorial(d)


def mesh_size(mesh: Mesh) -> float:
    """Largest element diameter h."""
    return float(np.max(mesh.element_diameters()))


def build_uniform_interval(n_cells: int, bc: BoundaryCondition | str) -> Mesh:
    if n_cells < 2:
        raise MeshValidationError("n_cells must be >= 2", field="n_cells", value=n_cells)
    vertices = np.arange(n_cells + 1, dtype=float) / n_cells
    elements = np.column_stack([np.arange(n_cells), np.arange(1, n_cells + 1)])
    mesh = Mesh(
        dim=1,
        vertices=vertices.reshape(-1, 1),
        elements=elements,
        boundary_vertices=frozenset({0, n_cells}),
        bc=BoundaryCondition.parse(bc),
    )
    log.debug("built interval mesh: %d cells, %d active vertices", n_cells, mesh.n_active)
    return mesh


def build_structured_square(n_per_side: int, bc: BoundaryCondition | str) -> Mesh:
    """Uniform triangulation of [0,1]^2, diagonals lower-left to upper-right.

    Vertices are numbered row-major: index ``j * (n + 1) + i`` sits at ``(i/n, j/n)``.
    """
    if n_per_side < 2:
        raise MeshValidationError("n_per_side must be >= 2", field="n_per_side", value=n_per_side)
    n = n_per_side
    ticks = np.arange(n + 1, dtype=float) / n
    xx, yy = np.meshgrid(ticks, ticks)
    vertices = np.column_stack([xx.ravel(), yy.ravel()])

    i, j = np.meshgrid(np.arange(n), np.arange(n))
    v00 = (j * (n + 1) + i).ravel()
    v10 = v00 + 1
    v01 = v00 + n + 1
    v11 = v01 + 1
    lower = np.column_stack([v00, v10, v11])
    upper = np.column_stack([v00, v11, v01])
    elements = np.empty((2 * n * n, 3), dtype=np.int64)
    elements[0::2] = lower
    elements[1::2] = upper

    grid = np.arange((n + 1) ** 2).reshape(n + 1, n + 1)
    boundary = np.concatenate([grid[0], grid[-1], grid[:, 0], grid[:, -1]])
    mesh = Mesh(
        dim=2,
        vertices=vertices,
        elements=elements,
        boundary_vertices=frozenset(int(v) for v in boundary),
        bc=BoundaryCondition.parse(bc),
    )
    log.debug("built square mesh: %d triangles, %d active vertices", mesh.n_elements, mesh.n_active)
    return mesh


def _factorial(d: int) -> int:
    return {1: 1, 2: 2, 3: 6}[d]
