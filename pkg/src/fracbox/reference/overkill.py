"""Overkill references on nested structured grids.

A grid at level k has 2^k cells per side. Coarse vertices are a subset of
the fine ones and every coarse element is a union of fine elements, so a
coarse P1 function is also a fine P1 function.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import sparse

from ..assembly import CoefficientField, InnerProduct, LoadFunction, assemble_bundle, assemble_mass
from ..config import load_config
from ..fracop import EigOracle, FracSolveSpec, frac_solve
from ..logging import get_logger
from ..mesh import BoundaryCondition, Mesh, build_dual_cells, build_structured_square, build_uniform_interval
from .constants import DEFAULTS
from .errors import MemoryGuardError, ReferenceValidationError
from .norms import full_values

log = get_logger(__name__)


def structured_mesh(level: int, dim: int, bc: BoundaryCondition | str) -> Mesh:
    if level < 1:
        raise ReferenceValidationError("level must be >= 1", field="level", value=level)
    if dim == 1:
        return build_uniform_interval(2**level, bc)
    if dim == 2:
        return build_structured_square(2**level, bc)
    raise ReferenceValidationError("structured levels exist for dim 1 and 2", field="dim", value=dim)


@dataclass(frozen=True, eq=False)
class OverkillReference:
    fine_mesh_level: int
    nodal_values: np.ndarray
    mesh: Mesh

    @property
    def dim(self) -> int:
        return self.mesh.dim

    @property
    def cells_per_side(self) -> int:
        return 2**self.fine_mesh_level

    @cached_property
    def fine_mass(self) -> sparse.csr_matrix:
        dual = build_dual_cells(self.mesh)
        return assemble_mass(self.mesh, dual, InnerProduct.exact(), active_only=False)

    def _grid(self, values: np.ndarray, n: int) -> np.ndarray:
        return values if self.dim == 1 else values.reshape(n + 1, n + 1)

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Fine P1 function at arbitrary points of the domain."""
        return evaluate_structured(self._grid(self.nodal_values, self.cells_per_side), points)

    __call__ = evaluate

    def _ratio(self, level: int) -> int:
        if not 1 <= level <= self.fine_mesh_level:
            raise ReferenceValidationError(
                f"level must be between 1 and {self.fine_mesh_level}", field="level", value=level
            )
        return 2 ** (self.fine_mesh_level - level)

    def restrict(self, level: int) -> np.ndarray:
        """Fine values at the vertices of the level grid, in that grid's numbering."""
        r = self._ratio(level)
        grid = self._grid(self.nodal_values, self.cells_per_side)
        if self.dim == 1:
            return grid[::r].copy()
        return grid[::r, ::r].ravel()

    def prolongate(self, coarse_values: np.ndarray, level: int) -> np.ndarray:
        """Coarse P1 function evaluated at every fine vertex."""
        self._ratio(level)
        n = 2**level
        coarse = np.asarray(coarse_values, dtype=float)
        return evaluate_structured(self._grid(coarse, n), self.mesh.vertices)

    def l2_error(self, coarse_mesh: Mesh, coarse_values: np.ndarray, level: int) -> float:
        """Exact L2 norm of the difference, computed with the fine consistent mass matrix."""
        expected = (2**level + 1) ** self.dim
        if coarse_mesh.n_vertices != expected:
            raise ReferenceValidationError(
                f"mesh has {coarse_mesh.n_vertices} vertices, level {level} has {expected}",
                field="coarse_mesh",
            )
        diff = self.prolongate(full_values(coarse_mesh, coarse_values), level) - self.nodal_values
        return float(np.sqrt(max(diff @ (self.fine_mass @ diff), 0.0)))


def evaluate_structured(grid: np.ndarray, points: np.ndarray) -> np.ndarray:
    """P1 interpolant of grid values on the structured mesh of [0, 1]^d.

    In 2D each square is split along its lower-left to upper-right diagonal;
    local coordinates with s >= t fall in the lower triangle.
    """
    points = np.asarray(points, dtype=float)
    if grid.ndim == 1:
        n = grid.shape[0] - 1
        return np.interp(points.reshape(points.shape[0], -1)[:, 0], np.linspace(0.0, 1.0, n + 1), grid)

    n = grid.shape[0] - 1
    x = np.clip(points[:, 0], 0.0, 1.0) * n
    y = np.clip(points[:, 1], 0.0, 1.0) * n
    i = np.minimum(np.floor(x).astype(np.int64), n - 1)
    j = np.minimum(np.floor(y).astype(np.int64), n - 1)
    s = x - i
    t = y - j
    u00 = grid[j, i]
    u10 = grid[j, i + 1]
    u01 = grid[j + 1, i]
    u11 = grid[j + 1, i + 1]
    lower = (1.0 - s) * u00 + (s - t) * u10 + t * u11
    upper = (1.0 - t) * u00 + s * u11 + (t - s) * u01
    return np.where(s >= t, lower, upper)


def overkill_solve(
    level: int,
    beta: float,
    spec: FracSolveSpec,
    load: LoadFunction,
    dim: int = 2,
    bc: BoundaryCondition | str = BoundaryCondition.NEUMANN,
    coeff: CoefficientField | None = None,
    max_unknowns: int | None = None,
    dense_limit: int | None = None,
) -> OverkillReference:
    """Fractional solve on the fine structured mesh.

    ``beta`` overrides ``spec.beta`` so one spec can serve a whole beta sweep.
    """
    limit = max_unknowns if max_unknowns is not None else DEFAULTS["OVERKILL_MAX_UNKNOWNS"]
    unknowns = (2**level + 1) ** dim
    if unknowns > limit:
        raise MemoryGuardError(
            f"overkill level {level} needs {unknowns} unknowns, limit is {limit}",
            unknowns=unknowns,
            limit=limit,
        )
    dense = dense_limit if dense_limit is not None else load_config().dense_limit
    if isinstance(spec.method, EigOracle) and unknowns > dense:
        raise MemoryGuardError(
            f"dense eigendecomposition with {unknowns} unknowns exceeds the dense limit {dense}",
            unknowns=unknowns,
            limit=dense,
        )

    start = time.perf_counter()
    mesh = structured_mesh(level, dim, bc)
    dual = build_dual_cells(mesh)
    bundle = assemble_bundle(
        mesh, dual, coeff or CoefficientField(), spec.bilinear_form, spec.inner_product, load
    )
    solve_spec = FracSolveSpec(
        beta=beta,
        method=spec.method,
        inner_product=spec.inner_product,
        bilinear_form=spec.bilinear_form,
        load=spec.load,
    )
    values = mesh.full_nodal(frac_solve(bundle, solve_spec, dense_limit=dense))
    values.setflags(write=False)
    log.info("overkill level %d (beta=%g): %d unknowns in %.1fs", level, beta, unknowns, time.perf_counter() - start)
    return OverkillReference(fine_mesh_level=level, nodal_values=values, mesh=mesh)
