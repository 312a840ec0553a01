"""Property suites run at fixed small scale by ``fracbox verify``."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ..assembly import (
    BilinearFormKind,
    CoefficientField,
    InnerProduct,
    assemble_bundle,
    assemble_mass,
    assemble_stiffness,
    banded,
    lump,
    q_norm_equivalence,
)
from ..fracop import (
    EigOracle,
    frac_solve,
    intrinsic_box_solve,
    ph_projection_tests,
    qt_symmetry_defect,
    spectral_bounds,
    validate_frac_spec,
)
from ..logging import get_logger
from ..mesh import (
    Mesh,
    build_dual_cells,
    build_structured_square,
    build_uniform_interval,
    flux_defect,
    mesh_size,
    reference_simplex_flux_check,
)
from ..mesh.constants import FLUX_RTOL, PARTITION_RTOL
from ..reference import checkerboard, indicator_load
from .errors import HarnessValidationError

log = get_logger(__name__)

LOEWNER_ATOL = 1e-12
INTRINSIC_ATOL = 1e-9
# rounding only: row sums are accumulated in a different order
ENDPOINT_RTOL = 1e-14
SPECTRAL_SPREAD = 2.0


@dataclass(frozen=True)
class SuiteResult:
    suite: str
    name: str
    passed: bool
    detail: str = ""


def _small_meshes() -> list[tuple[str, Mesh]]:
    return [
        ("interval:16 dirichlet", build_uniform_interval(16, "dirichlet")),
        ("interval:16 neumann", build_uniform_interval(16, "neumann")),
        ("square:4 neumann", build_structured_square(4, "neumann")),
        ("square:6 dirichlet", build_structured_square(6, "dirichlet")),
    ]


def geometry_suite() -> list[SuiteResult]:
    results = []
    for dim in (1, 2, 3):
        check = reference_simplex_flux_check(dim)
        detail = f"defect {check.max_defect:.2e}" + (f"; {'; '.join(check.details)}" if check.details else "")
        results.append(SuiteResult("geometry", f"reference flux identity d={dim}", check.passed, detail))
    for label, mesh in _small_meshes():
        dual = build_dual_cells(mesh)
        partition = dual.partition_defect(mesh.domain_measure)
        results.append(
            SuiteResult("geometry", f"dual partition {label}", partition <= PARTITION_RTOL, f"defect {partition:.2e}")
        )
        flux = flux_defect(mesh.element_coordinates)
        results.append(SuiteResult("geometry", f"element flux identity {label}", flux <= FLUX_RTOL, f"defect {flux:.2e}"))
    return results


def loewner_suite() -> list[SuiteResult]:
    """M <= M_i <= lump(M) for every bandwidth, with both ends of the family exact."""
    results = []
    meshes = [
        ("interval:32 dirichlet", build_uniform_interval(32, "dirichlet")),
        ("interval:128 neumann", build_uniform_interval(128, "neumann")),
        ("square:4 neumann", build_structured_square(4, "neumann")),
        ("square:8 dirichlet", build_structured_square(8, "dirichlet")),
    ]
    for label, mesh in meshes:
        dual = build_dual_cells(mesh)
        exact = assemble_mass(mesh, dual, InnerProduct.exact())
        dense = exact.toarray()
        lumped = lump(exact).toarray()
        n = mesh.n_active
        worst_lower = np.inf
        worst_upper = np.inf
        for bandwidth in range(n):
            member = banded(exact, bandwidth).toarray()
            worst_lower = min(worst_lower, float(scipy.linalg.eigvalsh(member - dense)[0]))
            worst_upper = min(worst_upper, float(scipy.linalg.eigvalsh(lumped - member)[0]))
        results.append(
            SuiteResult(
                "loewner",
                f"sandwich {label}",
                worst_lower >= -LOEWNER_ATOL and worst_upper >= -LOEWNER_ATOL,
                f"min eig(M_i - M) {worst_lower:.2e}, min eig(lump(M) - M_i) {worst_upper:.2e}",
            )
        )
        scale = float(np.max(np.abs(lumped)))
        full = float(np.max(np.abs(banded(exact, n - 1).toarray() - dense))) / scale
        zero = float(np.max(np.abs(banded(exact, 0).toarray() - lumped))) / scale
        results.append(
            SuiteResult(
                "loewner",
                f"family endpoints {label}",
                max(full, zero) <= ENDPOINT_RTOL,
                f"|M_(N-1) - M| {full:.1e}, |M_0 - lump(M)| {zero:.1e}",
            )
        )
        ratio = q_norm_equivalence(mesh, dual)
        results.append(
            SuiteResult(
                "loewner",
                f"Q norm equivalence {label}",
                1.0 - 1e-12 <= ratio.lower <= ratio.upper <= np.sqrt(mesh.dim + 2.0) + 1e-12,
                f"||Qx||/||x|| in [{ratio.lower:.4f}, {ratio.upper:.4f}]",
            )
        )
    return results


def projection_suite() -> list[SuiteResult]:
    results = []
    for label, mesh in (
        ("interval:12 dirichlet", build_uniform_interval(12, "dirichlet")),
        ("square:4 neumann", build_structured_square(4, "neumann")),
    ):
        report = ph_projection_tests(mesh, build_dual_cells(mesh))
        for check in report.checks:
            results.append(
                SuiteResult(
                    "projection",
                    f"P_h {check.inner_product} {label}",
                    check.is_identity == (check.inner_product == "mixed") and check.kernel_defect <= 1e-8,
                    f"identity defect {check.identity_defect:.2e}, kernel defect {check.kernel_defect:.2e}",
                )
            )
        witness = report.witness
        results.append(
            SuiteResult(
                "projection",
                f"mixed adjoint witness {label}",
                report.passed,
                f"gap {witness.gap:.3e} at ({witness.i}, {witness.j})" if witness else "no witness",
            )
        )
    return results


def intrinsic_suite() -> list[SuiteResult]:
    results = []
    cases = (
        ("interval:16 dirichlet", build_uniform_interval(16, "dirichlet"), indicator_load()),
        ("square:4 neumann", build_structured_square(4, "neumann"), checkerboard()),
    )
    for label, mesh, load in cases:
        dual = build_dual_cells(mesh)
        bundle = assemble_bundle(mesh, dual, CoefficientField(), BilinearFormKind.BOX_AVERAGED, "lumped", load)
        symmetry = qt_symmetry_defect(bundle, dual)
        results.append(
            SuiteResult("intrinsic", f"Q T_h selfadjoint {label}", symmetry <= 1e-10, f"defect {symmetry:.2e}")
        )
        for beta in (0.3, 0.5, 1.0, 1.7):
            spec = validate_frac_spec(beta, "lumped", method=EigOracle())
            gap = float(np.max(np.abs(frac_solve(bundle, spec) - intrinsic_box_solve(bundle, dual, beta))))
            results.append(
                SuiteResult("intrinsic", f"lumped = intrinsic beta={beta:g} {label}", gap <= INTRINSIC_ATOL, f"max gap {gap:.2e}")
            )
    return results


def spectral_suite() -> list[SuiteResult]:
    """lambda_min stays away from zero and lambda_max h^2 stays bounded over levels 3..9."""
    results = []
    for name in ("exact", "lumped"):
        spectra = []
        for level in range(3, 10):
            mesh = build_uniform_interval(2**level, "dirichlet")
            dual = build_dual_cells(mesh)
            K = assemble_stiffness(mesh, dual, CoefficientField(), BilinearFormKind.BOX_AVERAGED)
            M = assemble_mass(mesh, dual, name)
            spectra.append(spectral_bounds(K, M, mesh_size(mesh)))
        bottoms = [s.lambda_min for s in spectra]
        tops = [s.scaled_max for s in spectra]
        bottom_ok = min(bottoms) > 0 and max(bottoms) / min(bottoms) <= SPECTRAL_SPREAD
        top_ok = max(tops) / min(tops) <= SPECTRAL_SPREAD
        results.append(
            SuiteResult(
                "spectral",
                f"lambda_min stable ({name})",
                bottom_ok,
                f"lambda_min in [{min(bottoms):.6g}, {max(bottoms):.6g}]",
            )
        )
        results.append(
            SuiteResult(
                "spectral",
                f"lambda_max h^2 bounded ({name})",
                top_ok,
                f"lambda_max h^2 in [{min(tops):.6g}, {max(tops):.6g}]",
            )
        )
    return results


SUITES: dict[str, Callable[[], list[SuiteResult]]] = {
    "geometry": geometry_suite,
    "loewner": loewner_suite,
    "projection": projection_suite,
    "intrinsic": intrinsic_suite,
    "spectral": spectral_suite,
}


def run_suite(name: str) -> list[SuiteResult]:
    key = name.strip().lower()
    if key == "all":
        return [result for suite in SUITES.values() for result in suite()]
    if key not in SUITES:
        raise HarnessValidationError(
            f"Unknown suite '{name}'. Options: {', '.join([*SUITES, 'all'])}", field="suite", value=name
        )
    results = SUITES[key]()
    log.info("suite %s: %d of %d properties passed", key, sum(r.passed for r in results), len(results))
    return results
