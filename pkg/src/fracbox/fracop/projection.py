"""Matrix checks of the pseudo-projection P_h for each inner product.

P_h g is defined by <P_h g, x>_h = (g, Q x), so its nodal coefficients are
M_h^-1 F_Q(g). On V_h this is M_h^-1 M_mix.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from ..assembly import InnerProduct, InnerProductKind, assemble_mass, box_integrals
from ..mesh import DualCells, Mesh, locate_dual_cells, transfer_Q

IDENTITY_TOL = 1e-12
KERNEL_TOL = 1e-8
WITNESS_TOL = 1e-8


@dataclass(frozen=True)
class ProjectionCheck:
    inner_product: str
    identity_defect: float
    kernel_defect: float

    @property
    def is_identity(self) -> bool:
        return self.identity_defect <= IDENTITY_TOL


@dataclass(frozen=True)
class AdjointWitness:
    """(P_h phi_i, 1_{b_j}) against (phi_i, P_h 1_{b_j}) at the worst pair."""

    inner_product: str
    gap: float
    i: int
    j: int


@dataclass
class ProjectionReport:
    checks: list[ProjectionCheck] = field(default_factory=list)
    witness: AdjointWitness | None = None

    def check(self, label: str) -> ProjectionCheck:
        return next(c for c in self.checks if c.inner_product == label)

    @property
    def passed(self) -> bool:
        identity_ok = all(c.is_identity == (c.inner_product == InnerProductKind.MIXED.value) for c in self.checks)
        kernel_ok = all(c.kernel_defect <= KERNEL_TOL for c in self.checks)
        witness_ok = self.witness is not None and self.witness.gap > WITNESS_TOL
        return identity_ok and kernel_ok and witness_ok


def default_inner_products() -> list[InnerProduct]:
    return [InnerProduct.mixed(), InnerProduct.exact(), InnerProduct.lumped(), InnerProduct.banded(1)]


def ph_projection_tests(
    mesh: Mesh,
    dual: DualCells,
    inner_products: Sequence[InnerProduct] | None = None,
    n_test_functions: int = 4,
) -> ProjectionReport:
    inner_products = list(inner_products or default_inner_products())
    mixed = assemble_mass(mesh, dual, InnerProduct.mixed()).toarray()
    exact = assemble_mass(mesh, dual, InnerProduct.exact()).toarray()
    volumes = dual.active_cell_volume
    loads = _test_loads(mesh, dual, n_test_functions)

    report = ProjectionReport()
    for inner_product in inner_products:
        gram = assemble_mass(mesh, dual, inner_product).toarray()
        on_vh = np.linalg.solve(gram, mixed)
        identity_defect = float(np.max(np.abs(on_vh - np.eye(mesh.n_active))))

        kernel_defect = 0.0
        for fq, fq_averaged in loads:
            gap = np.linalg.solve(gram, fq - fq_averaged)
            scale = max(float(np.max(np.abs(np.linalg.solve(gram, fq)))), 1.0)
            kernel_defect = max(kernel_defect, float(np.max(np.abs(gap))) / scale)

        report.checks.append(
            ProjectionCheck(
                inner_product=inner_product.label,
                identity_defect=identity_defect,
                kernel_defect=kernel_defect,
            )
        )

    # for the mixed product P_h phi_i = phi_i, so the left side is M_mix[j, i]
    adjoint_side = exact @ np.linalg.solve(mixed, np.diag(volumes))
    gaps = np.abs(mixed.T - adjoint_side)
    i, j = np.unravel_index(int(np.argmax(gaps)), gaps.shape)
    report.witness = AdjointWitness(
        inner_product=InnerProductKind.MIXED.value,
        gap=float(gaps[i, j]),
        i=int(mesh.active_vertices[i]),
        j=int(mesh.active_vertices[j]),
    )
    return report


def _test_loads(mesh: Mesh, dual: DualCells, count: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Dual-cell integrals of smooth test functions g and of their dual averages.

    The dual average is integrated as a pointwise function, locating the
    dual cell of every quadrature point.
    """
    loads = []
    active = mesh.active_vertices
    for m in range(1, count + 1):

        def g(points: np.ndarray, m: int = m) -> np.ndarray:
            return np.prod(np.cos(m * np.pi * points), axis=1) + points[:, 0] ** 2

        fq_all = box_integrals(mesh, dual, g)
        averages = transfer_Q(mesh, dual, fq_all[active] / dual.active_cell_volume)
        nodal = mesh.full_nodal(averages.nodal())

        def averaged(points: np.ndarray, nodal: np.ndarray = nodal) -> np.ndarray:
            return nodal[locate_dual_cells(mesh, points)]

        loads.append((fq_all[active], box_integrals(mesh, dual, averaged)[active]))
    return loads
