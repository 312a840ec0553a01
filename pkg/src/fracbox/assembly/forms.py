"""Stiffness matrices, mass-matrix variants and lumping."""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import StrEnum
from functools import cache

import numpy as np
from scipy import sparse

from ..logging import get_logger
from ..mesh import DualCells, Mesh
from .coefficients import CoefficientField
from .constants import INNER_PRODUCT_ALIASES, INNER_PRODUCTS
from .errors import AssemblyValidationError
from .loads import box_integrals
from .quadrature import element_rule

log = get_logger(__name__)

_BANDED = re.compile(r"^banded\s*[:(]?\s*(\d+)\s*\)?$")


class BilinearFormKind(StrEnum):
    EXACT_GALERKIN = "exact-galerkin"
    BOX_AVERAGED = "box-averaged"
    Q_QUADRATURE = "q-quadrature"

    @classmethod
    def parse(cls, value: str | BilinearFormKind) -> BilinearFormKind:
        text = str(value).strip().lower().replace("_", "-")
        try:
            return cls(text)
        except ValueError as exc:
            options = ", ".join(kind.value for kind in cls)
            raise AssemblyValidationError(
                f"Unknown bilinear form '{value}'. Options: {options}", field="bilinear_form", value=value
            ) from exc


class InnerProductKind(StrEnum):
    EXACT = "exact"
    MIXED = "mixed"
    LUMPED = "lumped"
    BANDED = "banded"


@dataclass(frozen=True)
class InnerProduct:
    kind: InnerProductKind
    bandwidth: int | None = None

    def __post_init__(self) -> None:
        if self.kind is InnerProductKind.BANDED:
            if self.bandwidth is None or self.bandwidth < 0:
                raise AssemblyValidationError(
                    "Banded inner product needs a bandwidth >= 0", field="bandwidth", value=self.bandwidth
                )
        elif self.bandwidth is not None:
            raise AssemblyValidationError(
                f"{self.kind.value} inner product takes no bandwidth", field="bandwidth", value=self.bandwidth
            )

    @classmethod
    def exact(cls) -> InnerProduct:
        return cls(InnerProductKind.EXACT)

    @classmethod
    def mixed(cls) -> InnerProduct:
        return cls(InnerProductKind.MIXED)

    @classmethod
    def lumped(cls) -> InnerProduct:
        return cls(InnerProductKind.LUMPED)

    @classmethod
    def banded(cls, bandwidth: int) -> InnerProduct:
        return cls(InnerProductKind.BANDED, bandwidth)

    @classmethod
    def parse(cls, value: str | InnerProduct) -> InnerProduct:
        """Accepts ``exact``, ``mixed``, ``lumped`` and ``banded:<i>``."""
        if isinstance(value, InnerProduct):
            return value
        text = str(value).strip().lower()
        text = INNER_PRODUCT_ALIASES.get(text, text)
        match = _BANDED.match(text)
        if match:
            return cls.banded(int(match.group(1)))
        if text in INNER_PRODUCTS - {"banded"}:
            return cls(InnerProductKind(text))
        raise AssemblyValidationError(
            f"Unknown inner product '{value}'. Options: exact, mixed, lumped, banded:<i>",
            field="inner_product",
            value=value,
        )

    @property
    def label(self) -> str:
        if self.kind is InnerProductKind.BANDED:
            return f"banded:{self.bandwidth}"
        return self.kind.value

    def __str__(self) -> str:
        return self.label


def assemble_stiffness(
    mesh: Mesh,
    dual: DualCells,
    coeff: CoefficientField,
    kind: BilinearFormKind,
) -> sparse.csr_matrix:
    """Stiffness matrix on the active vertices."""
    coeff.validate(mesh)
    kind = BilinearFormKind.parse(kind)
    if kind is BilinearFormKind.Q_QUADRATURE:
        averages = coeff.vertex_average(mesh)
    else:
        averages = coeff.element_average(mesh)

    grads = dual.gradients
    local = dual.element_measure[:, None, None] * np.einsum("mid,mde,mje->mij", grads, averages, grads)
    matrix = _scatter(mesh, _symmetrize(local)) + _reaction(mesh, dual, coeff, kind)
    log.debug("stiffness (%s): %d active vertices, %d nonzeros", kind.value, mesh.n_active, matrix.nnz)
    return _restrict(matrix, mesh.active_vertices)


def assemble_mass(
    mesh: Mesh,
    dual: DualCells,
    kind: InnerProduct | str,
    active_only: bool = True,
) -> sparse.csr_matrix:
    """Matrix of the inner product on the nodal basis.

    Entry ``(i, j)`` of the mixed variant is the integral of phi_j over b_i.
    ``active_only=False`` returns the matrix on every vertex (banded variants
    excluded, their bandwidth refers to the active numbering).
    """
    kind = InnerProduct.parse(kind)
    measures = dual.element_measure
    if kind.kind is InnerProductKind.LUMPED:
        volumes = dual.active_cell_volume if active_only else dual.cell_volume
        return sparse.diags(volumes).tocsr()

    if kind.kind is InnerProductKind.MIXED:
        local = measures[:, None, None] * _mixed_reference_matrix(mesh.dim)[None, :, :]
    else:
        local = measures[:, None, None] * _exact_reference_matrix(mesh.dim)[None, :, :]
    matrix = _scatter(mesh, local)
    if not active_only:
        if kind.kind is InnerProductKind.BANDED:
            raise AssemblyValidationError("Banded inner products are defined on active vertices only", field="active_only")
        return matrix
    matrix = _restrict(matrix, mesh.active_vertices)
    if kind.kind is InnerProductKind.BANDED:
        return banded(matrix, kind.bandwidth)
    return matrix


def lump(matrix: np.ndarray | sparse.spmatrix) -> np.ndarray | sparse.csr_matrix:
    """Diagonal matrix of row sums."""
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise AssemblyValidationError(f"lump needs a square matrix, got shape {matrix.shape}", field="matrix")
    if sparse.issparse(matrix):
        return sparse.diags(np.asarray(matrix.sum(axis=1)).ravel()).tocsr()
    return np.diag(np.asarray(matrix).sum(axis=1))


def banded(matrix: sparse.spmatrix, bandwidth: int) -> sparse.csr_matrix:
    """D_i + lump(R_i) where D_i keeps the entries with |row - col| <= i."""
    n = matrix.shape[0]
    if not 0 <= bandwidth <= n - 1:
        raise AssemblyValidationError(
            f"bandwidth must be between 0 and {n - 1}", field="bandwidth", value=bandwidth
        )
    coo = sparse.coo_matrix(matrix)
    near = np.abs(coo.row - coo.col) <= bandwidth
    kept = sparse.coo_matrix((coo.data[near], (coo.row[near], coo.col[near])), shape=matrix.shape)
    rest = sparse.coo_matrix((coo.data[~near], (coo.row[~near], coo.col[~near])), shape=matrix.shape)
    return (kept.tocsr() + lump(rest.tocsr())).tocsr()


def _reaction(mesh: Mesh, dual: DualCells, coeff: CoefficientField, kind: BilinearFormKind) -> sparse.csr_matrix:
    if kind is BilinearFormKind.Q_QUADRATURE:
        weights = coeff.kappa_squared(mesh.vertices) * dual.cell_volume
        return sparse.diags(weights).tocsr()

    if kind is BilinearFormKind.BOX_AVERAGED:
        if coeff.constant_kappa:
            weights = float(coeff.kappa) ** 2 * dual.cell_volume
        else:
            weights = box_integrals(mesh, dual, coeff.kappa_squared)
        return sparse.diags(weights).tocsr()

    if coeff.constant_kappa:
        local = float(coeff.kappa) ** 2 * dual.element_measure[:, None, None] * _exact_reference_matrix(mesh.dim)
        return _scatter(mesh, local)
    rule = element_rule(mesh.dim)
    points = rule.points(mesh.element_coordinates)
    kappa2 = coeff.kappa_squared(points.reshape(-1, mesh.dim)).reshape(mesh.n_elements, -1)
    bary = rule.barycentric
    local = np.einsum("mq,q,qi,qj->mij", kappa2, rule.weights, bary, bary)
    return _scatter(mesh, dual.element_measure[:, None, None] * _symmetrize(local))


@cache
def _exact_reference_matrix(dim: int) -> np.ndarray:
    n = dim + 1
    return (np.ones((n, n)) + np.eye(n)) / ((dim + 1) * (dim + 2))


@cache
def _mixed_reference_matrix(dim: int) -> np.ndarray:
    """Row z holds int over A_z(K) of the barycentric coordinates, divided by |K|."""
    n = dim + 1
    eye = np.eye(n)
    centroid = np.full(n, 1.0 / n)
    reference = np.zeros((n, n))
    for z in range(n):
        if dim == 1:
            pieces = [np.array([eye[z], 0.5 * (eye[z] + eye[1 - z])])]
        else:
            a, b = (z + 1) % 3, (z + 2) % 3
            mid_a, mid_b = 0.5 * (eye[z] + eye[a]), 0.5 * (eye[z] + eye[b])
            pieces = [np.array([eye[z], mid_a, centroid]), np.array([eye[z], centroid, mid_b])]
        share = 1.0 / (n * len(pieces))
        for piece in pieces:
            reference[z] += share * piece.mean(axis=0)
    return reference


def _symmetrize(local: np.ndarray) -> np.ndarray:
    return 0.5 * (local + np.transpose(local, (0, 2, 1)))


def _scatter(mesh: Mesh, local: np.ndarray) -> sparse.csr_matrix:
    n = mesh.dim + 1
    rows = np.repeat(mesh.elements[:, :, None], n, axis=2)
    cols = np.repeat(mesh.elements[:, None, :], n, axis=1)
    shape = (mesh.n_vertices, mesh.n_vertices)
    return sparse.coo_matrix((local.ravel(), (rows.ravel(), cols.ravel())), shape=shape).tocsr()


def _restrict(matrix: sparse.spmatrix, active: np.ndarray) -> sparse.csr_matrix:
    if active.size == matrix.shape[0]:
        return sparse.csr_matrix(matrix)
    return sparse.csr_matrix(matrix)[active][:, active]
