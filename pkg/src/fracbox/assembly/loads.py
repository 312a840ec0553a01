"""Load vectors (f, phi_i) and (f, Q phi_i)."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from ..config import load_config
from ..logging import get_logger
from ..mesh import DualCells, Mesh, barycentric_gradients
from .constants import QUAD_ATOL
from .quadrature import PointFunction, adaptive_triangles, integrate_segment

log = get_logger(__name__)


@dataclass(frozen=True)
class LoadFunction:
    """Right-hand side f with the features quadrature needs to know about.

    ``breakpoints`` are coordinates (1D) where f may jump; ``singular_points``
    are coordinates where f is integrable but unbounded.
    """

    func: PointFunction
    name: str = "f"
    breakpoints: tuple[float, ...] = ()
    singular_points: tuple[float, ...] = ()

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(self.func(points), dtype=float)


def as_load(f: LoadFunction | PointFunction) -> LoadFunction:
    if isinstance(f, LoadFunction):
        return f
    return LoadFunction(func=f, name=getattr(f, "__name__", "f"))


def assemble_load_fem(mesh: Mesh, f: LoadFunction | PointFunction, rtol: float | None = None) -> np.ndarray:
    """Entries (f, phi_i) over the active vertices."""
    load = as_load(f)
    if mesh.dim == 1:
        values = _fem_interval(mesh, load, rtol)
    else:
        values = _fem_triangles(mesh, load, rtol)
    return values[mesh.active_vertices]


def assemble_load_box(
    mesh: Mesh,
    dual: DualCells,
    f: LoadFunction | PointFunction,
    rtol: float | None = None,
) -> np.ndarray:
    """Entries (f, Q phi_i), the integral of f over each active dual cell."""
    return box_integrals(mesh, dual, f, rtol)[mesh.active_vertices]


def box_integrals(
    mesh: Mesh,
    dual: DualCells,
    f: LoadFunction | PointFunction,
    rtol: float | None = None,
) -> np.ndarray:
    """Integral of f over the dual cell of every vertex."""
    load = as_load(f)
    if mesh.dim == 1:
        return _box_interval(mesh, load, rtol)
    return _box_triangles(mesh, dual, load, rtol)


def _tolerances(rtol: float | None) -> tuple[float, float]:
    config = load_config()
    if rtol is not None:
        return rtol, config.singular_rtol
    return config.quad_rtol, config.singular_rtol


def _scalar(load: LoadFunction, weight: Callable[[float], float] | None = None) -> Callable[[float], float]:
    if weight is None:
        return lambda x: float(load(np.array([[x]]))[0])
    return lambda x: float(load(np.array([[x]]))[0]) * weight(x)


def _touches_singularity(load: LoadFunction, a: float, b: float) -> bool:
    return any(a <= p <= b for p in load.singular_points)


def _fem_interval(mesh: Mesh, load: LoadFunction, rtol: float | None) -> np.ndarray:
    regular_rtol, singular_rtol = _tolerances(rtol)
    values = np.zeros(mesh.n_vertices)
    for k, (i, j) in enumerate(mesh.elements):
        x0, x1 = float(mesh.vertices[i, 0]), float(mesh.vertices[j, 0])
        h = x1 - x0
        tol = singular_rtol if _touches_singularity(load, x0, x1) else regular_rtol
        for vertex, weight in ((i, lambda x: (x1 - x) / h), (j, lambda x: (x - x0) / h)):
            values[vertex] += integrate_segment(
                _scalar(load, weight),
                x0,
                x1,
                rtol=tol,
                atol=QUAD_ATOL,
                breakpoints=load.breakpoints,
                singular_points=load.singular_points,
                element=k,
            )
    log.debug("FEM load for %s on %d elements", load.name, mesh.n_elements)
    return values


def _box_interval(mesh: Mesh, load: LoadFunction, rtol: float | None) -> np.ndarray:
    regular_rtol, singular_rtol = _tolerances(rtol)
    values = np.zeros(mesh.n_vertices)
    g = _scalar(load)
    for k, (i, j) in enumerate(mesh.elements):
        x0, x1 = float(mesh.vertices[i, 0]), float(mesh.vertices[j, 0])
        mid = 0.5 * (x0 + x1)
        for vertex, (a, b) in ((i, (x0, mid)), (j, (mid, x1))):
            tol = singular_rtol if _touches_singularity(load, a, b) else regular_rtol
            values[vertex] += integrate_segment(
                g,
                a,
                b,
                rtol=tol,
                atol=QUAD_ATOL,
                breakpoints=load.breakpoints,
                singular_points=load.singular_points,
                element=k,
            )
    log.debug("box load for %s on %d elements", load.name, mesh.n_elements)
    return values


def _fem_triangles(mesh: Mesh, load: LoadFunction, rtol: float | None) -> np.ndarray:
    tol, _ = _tolerances(rtol)
    coords = mesh.element_coordinates
    grads = barycentric_gradients(coords)

    def integrand(points: np.ndarray, owners: np.ndarray) -> np.ndarray:
        offset = points - coords[owners, 0][:, None, :]
        lam = np.einsum("mjd,mqd->mqj", grads[owners], offset)
        lam[:, :, 0] += 1.0
        f_values = load(points.reshape(-1, 2)).reshape(points.shape[:2])
        return f_values[:, :, None] * lam

    owners = np.arange(mesh.n_elements)
    local = adaptive_triangles(integrand, np.array(coords), owners, 3, rtol=tol, atol=QUAD_ATOL)
    values = np.zeros(mesh.n_vertices)
    np.add.at(values, mesh.elements, local)
    return values


def _box_triangles(mesh: Mesh, dual: DualCells, load: LoadFunction, rtol: float | None) -> np.ndarray:
    tol, _ = _tolerances(rtol)
    coords = mesh.element_coordinates
    centroid = dual.barycenters
    pieces, owners, vertices = [], [], []
    for z in range(3):
        a, b = (z + 1) % 3, (z + 2) % 3
        mid_a = 0.5 * (coords[:, z] + coords[:, a])
        mid_b = 0.5 * (coords[:, z] + coords[:, b])
        pieces.append(np.stack([coords[:, z], mid_a, centroid], axis=1))
        pieces.append(np.stack([coords[:, z], centroid, mid_b], axis=1))
        owners.extend([np.arange(mesh.n_elements)] * 2)
        vertices.extend([mesh.elements[:, z]] * 2)

    def integrand(points: np.ndarray, _owners: np.ndarray) -> np.ndarray:
        return load(points.reshape(-1, 2)).reshape(points.shape[:2])

    owner_ids = np.concatenate(owners)
    integrals = adaptive_triangles(
        integrand,
        np.concatenate(pieces),
        owner_ids,
        1,
        rtol=tol,
        atol=QUAD_ATOL,
    )
    values = np.zeros(mesh.n_vertices)
    np.add.at(values, np.concatenate(vertices), integrals[:, 0])
    return values
