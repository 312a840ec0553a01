"""L2 errors of P1 functions against reference functions."""

from __future__ import annotations

from collections.abc import Callable

import numpy as np

from ..assembly.quadrature import SimplexRule, element_rule, interval_rule
from ..mesh import Mesh
from .errors import ReferenceValidationError
from .series import SeriesSolution

ReferenceFunction = Callable[[np.ndarray], np.ndarray]


def full_values(mesh: Mesh, nodal_values: np.ndarray) -> np.ndarray:
    """Nodal values on every vertex; active-only input is extended by zero."""
    values = np.asarray(nodal_values, dtype=float)
    if values.shape == (mesh.n_vertices,):
        return values
    if values.shape == (mesh.n_active,):
        return mesh.full_nodal(values)
    raise ReferenceValidationError(
        f"expected {mesh.n_active} or {mesh.n_vertices} nodal values, got {values.shape}",
        field="nodal_values",
        value=values.shape,
    )


def l2_error(
    mesh: Mesh,
    nodal_values: np.ndarray,
    reference: ReferenceFunction,
    rule: SimplexRule | None = None,
) -> float:
    """||u_h - u_ref|| in L2 with a fixed rule on every element."""
    rule = rule or element_rule(mesh.dim)
    values = full_values(mesh, nodal_values)
    coords = mesh.element_coordinates
    points = rule.points(coords)
    m, q, d = points.shape
    uh = np.einsum("qv,mv->mq", rule.barycentric, values[mesh.elements])
    ref = np.asarray(reference(points.reshape(-1, d)), dtype=float).reshape(m, q)
    squared = np.abs(mesh.signed_measures) * ((uh - ref) ** 2 @ rule.weights)
    return float(np.sqrt(np.sum(squared)))


def series_error(mesh: Mesh, nodal_values: np.ndarray, solution: SeriesSolution) -> float:
    if mesh.dim != 1:
        raise ReferenceValidationError("series references live on the unit interval", field="mesh", value=mesh.dim)
    return l2_error(mesh, nodal_values, solution, rule=interval_rule(5))
