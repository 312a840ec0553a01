"""Operator bundles: stiffness, inner-product matrix and both load vectors."""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import io as sio
from scipy import sparse

from ..logging import get_logger
from ..mesh import DualCells, Mesh
from .coefficients import CoefficientField
from .forms import BilinearFormKind, InnerProduct, assemble_mass, assemble_stiffness
from .loads import LoadFunction, assemble_load_box, assemble_load_fem
from .quadrature import PointFunction

log = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class OperatorBundle:
    K: sparse.csr_matrix
    M: sparse.csr_matrix
    F: np.ndarray
    FQ: np.ndarray
    n: int
    inner_product: InnerProduct
    bilinear_form: BilinearFormKind

    def load(self, box: bool) -> np.ndarray:
        return self.FQ if box else self.F


def assemble_bundle(
    mesh: Mesh,
    dual: DualCells,
    coeff: CoefficientField,
    form: BilinearFormKind | str,
    inner_product: InnerProduct | str,
    f: LoadFunction | PointFunction,
    rtol: float | None = None,
) -> OperatorBundle:
    start = time.perf_counter()
    form = BilinearFormKind.parse(form)
    inner_product = InnerProduct.parse(inner_product)
    K = assemble_stiffness(mesh, dual, coeff, form)
    M = assemble_mass(mesh, dual, inner_product)
    F = assemble_load_fem(mesh, f, rtol=rtol)
    FQ = assemble_load_box(mesh, dual, f, rtol=rtol)
    for vector in (F, FQ):
        vector.setflags(write=False)
    log.info(
        "assembled %s / %s bundle with %d unknowns in %.3fs",
        form.value,
        inner_product.label,
        mesh.n_active,
        time.perf_counter() - start,
    )
    return OperatorBundle(
        K=K,
        M=M,
        F=F,
        FQ=FQ,
        n=mesh.n_active,
        inner_product=inner_product,
        bilinear_form=form,
    )


def export_bundle(bundle: OperatorBundle, directory: Path) -> list[Path]:
    """Write K.mtx, M.mtx (Matrix Market coordinate) and F.txt, FQ.txt."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, matrix in (("K", bundle.K), ("M", bundle.M)):
        path = directory / f"{name}.mtx"
        sio.mmwrite(str(path), sparse.coo_matrix(matrix), precision=17)
        written.append(path)
    for name, vector in (("F", bundle.F), ("FQ", bundle.FQ)):
        path = directory / f"{name}.txt"
        np.savetxt(path, vector, fmt="%.17g")
        written.append(path)
    log.info("exported bundle to %s", directory)
    return written
