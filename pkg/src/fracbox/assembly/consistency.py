"""Empirical checks of inner-product admissibility."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..mesh import DualCells, Mesh, mesh_size
from .coefficients import laplacian_coefficients
from .forms import BilinearFormKind, InnerProduct, assemble_mass, assemble_stiffness


@dataclass(frozen=True)
class RatioBounds:
    lower: float
    upper: float
    samples: int


def inner_product_consistency(
    mesh: Mesh,
    dual: DualCells,
    inner_product: InnerProduct | str,
    n_samples: int = 20,
    seed: int = 0,
) -> float:
    """Largest |(x, y) - <x, y>_h| / (h^2 |x|_1 |y|_1) over random nodal pairs."""
    rng = np.random.default_rng(seed)
    exact = assemble_mass(mesh, dual, InnerProduct.exact())
    discrete = assemble_mass(mesh, dual, inner_product)
    laplace = assemble_stiffness(mesh, dual, laplacian_coefficients(), BilinearFormKind.BOX_AVERAGED)
    h2 = mesh_size(mesh) ** 2
    worst = 0.0
    for _ in range(n_samples):
        x, y = rng.standard_normal((2, mesh.n_active))
        gap = abs(x @ (exact @ y) - x @ (discrete @ y))
        seminorms = np.sqrt(max(x @ (laplace @ x), 0.0) * max(y @ (laplace @ y), 0.0))
        if seminorms > 0:
            worst = max(worst, gap / (h2 * seminorms))
    return worst


def q_norm_equivalence(mesh: Mesh, dual: DualCells, n_samples: int = 50, seed: int = 0) -> RatioBounds:
    """Bounds of ||Q x|| / ||x|| over random nodal vectors."""
    rng = np.random.default_rng(seed)
    exact = assemble_mass(mesh, dual, InnerProduct.exact())
    volumes = dual.active_cell_volume
    ratios = []
    for _ in range(n_samples):
        x = rng.standard_normal(mesh.n_active)
        ratios.append(np.sqrt((x**2 @ volumes) / (x @ (exact @ x))))
    return RatioBounds(lower=float(min(ratios)), upper=float(max(ratios)), samples=n_samples)
