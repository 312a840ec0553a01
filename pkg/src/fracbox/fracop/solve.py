"""Fractional FEM, box and intrinsic box solutions."""

from __future__ import annotations

import numpy as np
import scipy.linalg
from scipy import sparse
from scipy.sparse import linalg as spla

from ..assembly import InnerProductKind, OperatorBundle
from ..logging import get_logger
from ..mesh import DualCells
from .apply import FracResult, Pencil, run_frac_inverse
from .constants import SYMMETRY_RTOL
from .errors import FactorizationError, FracOpValidationError, SolverError
from .validators import FracSolveSpec, LoadKind, validate_beta

log = get_logger(__name__)


def frac_solve(bundle: OperatorBundle, spec: FracSolveSpec, dense_limit: int | None = None) -> np.ndarray:
    return frac_solve_report(bundle, spec, dense_limit).values


def frac_solve_report(bundle: OperatorBundle, spec: FracSolveSpec, dense_limit: int | None = None) -> FracResult:
    """(M^-1 K)^-beta M^-1 F_* with F_* the box or FEM load."""
    if spec.inner_product.kind is InnerProductKind.MIXED:
        raise FracOpValidationError(
            "the mixed inner product does not give a selfadjoint realization of L_h",
            field="inner_product",
            value=spec.inner_product.label,
        )
    if bundle.inner_product != spec.inner_product:
        raise FracOpValidationError(
            f"bundle uses inner product {bundle.inner_product.label}, spec asks for {spec.inner_product.label}",
            field="inner_product",
        )
    if bundle.bilinear_form is not spec.bilinear_form:
        raise FracOpValidationError(
            f"bundle uses {bundle.bilinear_form.value}, spec asks for {spec.bilinear_form.value}",
            field="bilinear_form",
        )
    load = bundle.load(box=spec.load is LoadKind.BOX)
    rhs = solve_mass(bundle.M, load)
    return run_frac_inverse(Pencil(bundle.K, bundle.M, dense_limit), spec.beta, rhs, spec.method)


def solve_mass(M: sparse.spmatrix, vector: np.ndarray) -> np.ndarray:
    """M^-1 vector, with a shortcut for diagonal M."""
    M = sparse.csr_matrix(M)
    diagonal = M.diagonal()
    if M.nnz == np.count_nonzero(diagonal):
        return vector / diagonal
    try:
        return spla.splu(M.tocsc()).solve(np.asarray(vector, dtype=float))
    except RuntimeError as exc:
        raise FactorizationError(f"mass matrix is singular: {exc}") from exc


def qt_operator(bundle: OperatorBundle, dual: DualCells) -> tuple[np.ndarray, np.ndarray]:
    """Matrix of Q T_h on dual-cell indicators, and the dual-cell volumes.

    Column j is the nodal box solution for the load 1_{b_j}, i.e. K^-1 W e_j.
    """
    if bundle.inner_product.kind is not InnerProductKind.LUMPED:
        raise FracOpValidationError(
            f"the intrinsic box solution needs the lumped inner product, got {bundle.inner_product.label}",
            field="inner_product",
        )
    volumes = dual.active_cell_volume
    if volumes.shape != (bundle.n,) or not np.allclose(bundle.M.diagonal(), volumes, rtol=1e-12, atol=0.0):
        raise FracOpValidationError("bundle and dual cells belong to different meshes", field="dual")
    try:
        solution = spla.splu(sparse.csc_matrix(bundle.K)).solve(np.diag(volumes))
    except RuntimeError as exc:
        raise SolverError(f"stiffness matrix is singular: {exc}") from exc
    return solution, volumes


def qt_symmetry_defect(bundle: OperatorBundle, dual: DualCells) -> float:
    """Relative asymmetry of Q T_h in the volume-weighted inner product."""
    B, W = qt_operator(bundle, dual)
    weighted = W[:, None] * B
    return float(np.max(np.abs(weighted - weighted.T)) / np.max(np.abs(weighted)))


def intrinsic_box_solve(
    bundle: OperatorBundle,
    dual: DualCells,
    beta: float,
    fq: np.ndarray | None = None,
) -> np.ndarray:
    """Q^-1 (Q T_h)^beta applied to the dual averages of f."""
    beta = validate_beta(beta)
    B, W = qt_operator(bundle, dual)
    root = np.sqrt(W)
    S = root[:, None] * B / root[None, :]
    defect = float(np.max(np.abs(S - S.T)) / np.max(np.abs(S)))
    if defect > SYMMETRY_RTOL:
        raise SolverError(f"Q T_h is not selfadjoint in the dual inner product (defect {defect:.2e})")
    mu, U = scipy.linalg.eigh(0.5 * (S + S.T))
    if mu[0] <= 0:
        raise SolverError(f"Q T_h has a non-positive eigenvalue {mu[0]:.3e}")
    power = (U * mu**beta) @ U.T
    loads = bundle.FQ if fq is None else np.asarray(fq, dtype=float)
    averages = loads / W
    log.debug("intrinsic box solve: n=%d, beta=%g, symmetry defect %.2e", bundle.n, beta, defect)
    return (power @ (root * averages)) / root
