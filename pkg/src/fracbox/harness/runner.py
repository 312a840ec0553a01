"""Refinement studies: solve on nested levels, measure errors, attach rates."""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ..assembly import (
    AssemblyError,
    CoefficientField,
    InnerProduct,
    LoadFunction,
    OperatorBundle,
    assemble_bundle,
    assemble_mass,
)
from ..fracop import (
    Contour,
    EigOracle,
    FracMethod,
    FracOpError,
    FracSolveSpec,
    Sinc,
    extremal_eigenvalues,
    frac_solve,
    sinc_scalar,
)
from ..logging import get_logger
from ..mesh import BoundaryCondition, DualCells, Mesh, MeshError, build_dual_cells, mesh_size
from ..reference import (
    OverkillReference,
    ReferenceSolutionError,
    SeriesSolution,
    checkerboard,
    indicator_load,
    indicator_solution,
    overkill_solve,
    series_error,
    singular_load,
    singular_solution,
    structured_mesh,
)
from ..reference.constants import DEFAULTS as REFERENCE_DEFAULTS
from .constants import GUARD_FRACTION, GUARD_GRID_POINTS
from .eoc import eoc, theoretical_rate
from .errors import HarnessValidationError
from .spec import EocReport, EocRow, ExperimentKind, ExperimentSpec

log = get_logger(__name__)

ROW_ERRORS = (MeshError, AssemblyError, FracOpError, ReferenceSolutionError)

Reference = SeriesSolution | OverkillReference


@dataclass(frozen=True)
class LevelResult:
    beta: float
    dofs: int
    h: float
    l2_error: float
    guard_tolerance: float | None = None
    failure: str | None = None


@dataclass(frozen=True)
class InnerProductComparison:
    report: EocReport
    terminal: dict[tuple[float, str], float | None]
    differences: dict[tuple[float, str, str], float]
    solution_spread: dict[float, float]

    def max_difference(self, beta: float) -> float:
        values = [d for (b, _, _), d in self.differences.items() if b == beta]
        return max(values) if values else math.nan


def experiment_load(kind: ExperimentKind) -> LoadFunction:
    if kind is ExperimentKind.INDICATOR_1D:
        return indicator_load()
    if kind is ExperimentKind.SINGULAR_1D:
        return singular_load()
    return checkerboard()


def experiment_bc(kind: ExperimentKind) -> BoundaryCondition:
    return BoundaryCondition.NEUMANN if kind.dim == 2 else BoundaryCondition.DIRICHLET


def build_references(spec: ExperimentSpec) -> dict[float, Reference]:
    """One reference per beta, shared by every level and inner product."""
    references: dict[float, Reference] = {}
    for beta in spec.betas:
        if spec.experiment is ExperimentKind.INDICATOR_1D:
            terms = spec.reference_terms or REFERENCE_DEFAULTS["INDICATOR_TERMS"]
            references[beta] = indicator_solution(beta, terms)
        elif spec.experiment is ExperimentKind.SINGULAR_1D:
            terms = spec.reference_terms or REFERENCE_DEFAULTS["SINGULAR_TERMS"]
            references[beta] = singular_solution(beta, terms)
        else:
            overkill_spec = FracSolveSpec(
                beta=beta,
                method=spec.frac_method,
                inner_product=InnerProduct.lumped(),
                bilinear_form=spec.bilinear_form,
                load=spec.load,
            )
            references[beta] = overkill_solve(
                spec.overkill_level,
                beta,
                overkill_spec,
                experiment_load(spec.experiment),
                dim=2,
                bc=experiment_bc(spec.experiment),
            )
    return references


def run_experiment(spec: ExperimentSpec) -> EocReport:
    start = time.perf_counter()
    log.info(
        "experiment %s (%s): betas %s, levels %s, inner products %s",
        spec.name,
        spec.experiment.value,
        list(spec.betas),
        list(spec.levels),
        [ip.label for ip in spec.inner_products],
    )
    references = build_references(spec)
    load = experiment_load(spec.experiment)
    tasks = [(ip, level) for ip in spec.inner_products for level in spec.levels]

    def run(task: tuple[InnerProduct, int]) -> list[LevelResult]:
        return _run_level(spec, references, load, *task)

    with ThreadPoolExecutor(max_workers=spec.max_workers) as pool:
        results = dict(zip(tasks, pool.map(run, tasks)))

    rates = {beta: theoretical_rate(spec.experiment, beta, spec.load) for beta in spec.betas}
    rows: list[EocRow] = []
    for b, beta in enumerate(spec.betas):
        lower, upper = rates[beta]
        for ip in spec.inner_products:
            series = [results[(ip, level)][b] for level in spec.levels]
            orders = _orders(series)
            for level, result, order in zip(spec.levels, series, orders):
                flagged = (
                    result.failure is None
                    and result.guard_tolerance is not None
                    and result.guard_tolerance > GUARD_FRACTION * result.l2_error
                )
                if flagged:
                    log.warning(
                        "beta=%g %s level %d: method tolerance %.3e exceeds %.0f%% of the error %.3e",
                        beta,
                        ip.label,
                        level,
                        result.guard_tolerance,
                        100 * GUARD_FRACTION,
                        result.l2_error,
                    )
                rows.append(
                    EocRow(
                        experiment=spec.experiment.value,
                        beta=beta,
                        inner_product=ip.label,
                        load=spec.load.value,
                        level=level,
                        dofs=result.dofs,
                        h=result.h,
                        l2_error=result.l2_error,
                        eoc=order,
                        theoretical_rate=lower,
                        rate_upper=upper,
                        guard_tolerance=result.guard_tolerance,
                        flagged=flagged,
                        failure=result.failure,
                    )
                )
    log.info("experiment %s finished in %.1fs", spec.name, time.perf_counter() - start)
    return EocReport(spec=spec, rows=tuple(rows), theoretical_rates=rates)


def compare_inner_products(spec: ExperimentSpec) -> InnerProductComparison:
    """Run the study for every inner product and compare terminal orders."""
    if len(spec.inner_products) < 2:
        raise HarnessValidationError(
            "comparing inner products needs at least two of them",
            field="inner_products",
            value=[ip.label for ip in spec.inner_products],
        )
    report = run_experiment(spec)
    labels = [ip.label for ip in spec.inner_products]
    terminal = {(beta, label): report.terminal_eoc(beta, label) for beta in spec.betas for label in labels}
    differences: dict[tuple[float, str, str], float] = {}
    for beta in spec.betas:
        for a, b in combinations(labels, 2):
            ea, eb = terminal[(beta, a)], terminal[(beta, b)]
            differences[(beta, a, b)] = abs(ea - eb) if ea is not None and eb is not None else math.nan
    return InnerProductComparison(
        report=report,
        terminal=terminal,
        differences=differences,
        solution_spread=solution_spread(spec, spec.levels[0]),
    )


def solution_spread(spec: ExperimentSpec, level: int) -> dict[float, float]:
    """Max nodal difference between the inner products' solutions at one level."""
    mesh = structured_mesh(level, spec.experiment.dim, experiment_bc(spec.experiment))
    dual = build_dual_cells(mesh)
    load = experiment_load(spec.experiment)
    solutions = {}
    for ip in spec.inner_products:
        bundle = assemble_bundle(mesh, dual, CoefficientField(), spec.bilinear_form, ip, load)
        solutions[ip.label] = [frac_solve(bundle, _solve_spec(spec, ip, beta)) for beta in spec.betas]
    spread = {}
    for b, beta in enumerate(spec.betas):
        values = np.array([solutions[ip.label][b] for ip in spec.inner_products])
        spread[beta] = float(np.max(values.max(axis=0) - values.min(axis=0)))
    return spread


def quadrature_tolerance(
    spec: ExperimentSpec,
    mesh: Mesh,
    dual: DualCells,
    bundle: OperatorBundle,
    beta: float,
    values: np.ndarray,
) -> float | None:
    """L2 distance between the method's solution and the exact discrete one.

    Small problems compare with the eigendecomposition; larger sinc runs use
    the scalar error of the rule over the spectral bracket. Contour runs above
    the dense limit are not bounded.
    """
    method = spec.frac_method
    if isinstance(method, EigOracle):
        return 0.0
    fraction = beta - math.floor(beta)
    if isinstance(method, Sinc) and fraction == 0.0:
        return 0.0
    mass = assemble_mass(mesh, dual, InnerProduct.exact())
    if bundle.n <= spec.guard_dense_limit:
        oracle = frac_solve(bundle, _solve_spec(spec, bundle.inner_product, beta, EigOracle()))
        diff = values - oracle
        return float(np.sqrt(max(diff @ (mass @ diff), 0.0)))
    if isinstance(method, Contour):
        return None
    bounds = extremal_eigenvalues(bundle.K, bundle.M)
    lam = np.geomspace(bounds.lambda_min, bounds.lambda_max, GUARD_GRID_POINTS)
    relative = float(np.max(np.abs(sinc_scalar(lam, fraction, method) * lam**fraction - 1.0)))
    return relative * float(np.sqrt(max(values @ (mass @ values), 0.0)))


def _solve_spec(
    spec: ExperimentSpec, ip: InnerProduct, beta: float, method: FracMethod | None = None
) -> FracSolveSpec:
    return FracSolveSpec(
        beta=beta,
        method=method if method is not None else spec.frac_method,
        inner_product=ip,
        bilinear_form=spec.bilinear_form,
        load=spec.load,
    )


def _run_level(
    spec: ExperimentSpec,
    references: dict[float, Reference],
    load: LoadFunction,
    ip: InnerProduct,
    level: int,
) -> list[LevelResult]:
    dofs = (2**level + 1) ** spec.experiment.dim
    try:
        mesh = structured_mesh(level, spec.experiment.dim, experiment_bc(spec.experiment))
        dual = build_dual_cells(mesh)
        bundle = assemble_bundle(mesh, dual, CoefficientField(), spec.bilinear_form, ip, load)
    except ROW_ERRORS as exc:
        log.error("%s level %d: assembly failed: %s", ip.label, level, exc)
        return [LevelResult(beta, dofs, math.nan, math.nan, failure=str(exc)) for beta in spec.betas]

    h = mesh_size(mesh)
    results = []
    for beta in spec.betas:
        try:
            values = frac_solve(bundle, _solve_spec(spec, ip, beta))
            reference = references[beta]
            if isinstance(reference, OverkillReference):
                error = reference.l2_error(mesh, values, level)
            else:
                error = series_error(mesh, values, reference)
            tolerance = quadrature_tolerance(spec, mesh, dual, bundle, beta, values)
        except ROW_ERRORS as exc:
            log.error("beta=%g %s level %d failed: %s", beta, ip.label, level, exc)
            results.append(LevelResult(beta, mesh.n_vertices, h, math.nan, failure=str(exc)))
            continue
        log.info("beta=%g %s level %d: dofs=%d error=%.6e", beta, ip.label, level, mesh.n_vertices, error)
        results.append(LevelResult(beta, mesh.n_vertices, h, error, guard_tolerance=tolerance))
    return results


def _orders(series: list[LevelResult]) -> list[float | None]:
    orders: list[float | None] = [None]
    for previous, current in zip(series, series[1:]):
        if previous.failure or current.failure:
            orders.append(None)
        else:
            orders.append(eoc([previous.l2_error, current.l2_error], [previous.h, current.h])[0])
    return orders
