"""CLI entry point for fracbox."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import List, Optional

import typer

from fracbox import __version__
from fracbox.assembly import AssemblyError, AssemblyValidationError, CoefficientField, assemble_bundle, export_bundle
from fracbox.assembly import format_error_for_user as format_assembly_error
from fracbox.config import ConfigError
from fracbox.config import format_error_for_user as format_config_error
from fracbox.fracop import (
    FracOpError,
    FracOpValidationError,
    describe_method,
    frac_solve_report,
    parse_method,
    validate_frac_spec,
)
from fracbox.fracop import format_error_for_user as format_fracop_error
from fracbox.fracop.constants import DEFAULTS as FRACOP_DEFAULTS
from fracbox.harness import (
    ConfigFileError,
    HarnessError,
    HarnessValidationError,
    compare_inner_products,
    format_csv,
    load_experiment_config,
    run_experiment,
    run_suite,
    summarize,
    write_csv,
)
from fracbox.harness import format_error_for_user as format_harness_error
from fracbox.logging import set_level
from fracbox.mesh import (
    MeshError,
    MeshFormatError,
    MeshValidationError,
    build_dual_cells,
    build_mesh,
    mesh_size,
    parse_mesh_spec,
)
from fracbox.mesh import format_error_for_user as format_mesh_error
from fracbox.reference import ReferenceSolutionError, ReferenceValidationError, select_load
from fracbox.reference import format_error_for_user as format_reference_error

app = typer.Typer(help="Fractional elliptic problems with P1 finite elements and the box method.")

USAGE_ERRORS = (
    MeshValidationError,
    MeshFormatError,
    AssemblyValidationError,
    FracOpValidationError,
    ReferenceValidationError,
    HarnessValidationError,
    ConfigFileError,
    ConfigError,
)


def version_callback(value: bool):
    """Show version and exit."""
    if value:
        typer.echo(f"fracbox version {__version__}")
        raise typer.Exit()


@app.callback()
def main(
    version: bool = typer.Option(
        None,
        "--version",
        "-v",
        callback=version_callback,
        is_eager=True,
        help="Show version and exit.",
    ),
    verbose: bool = typer.Option(False, "--verbose", help="Log progress to stderr."),
    debug: bool = typer.Option(False, "--debug", help="Log solver details to stderr."),
):
    """Fractional elliptic problems with P1 finite elements and the box method."""
    if debug:
        set_level(logging.DEBUG)
    elif verbose:
        set_level(logging.INFO)


def _format_error(exc: Exception) -> str:
    if isinstance(exc, MeshError):
        return format_mesh_error(exc)
    if isinstance(exc, AssemblyError):
        return format_assembly_error(exc)
    if isinstance(exc, FracOpError):
        return format_fracop_error(exc)
    if isinstance(exc, ReferenceSolutionError):
        return format_reference_error(exc)
    if isinstance(exc, HarnessError):
        return format_harness_error(exc)
    if isinstance(exc, ConfigError):
        return format_config_error(exc)
    return f"Error: {exc}"


def _fail(exc: Exception) -> typer.Exit:
    typer.secho(_format_error(exc), fg=typer.colors.RED, err=True)
    return typer.Exit(code=2 if isinstance(exc, USAGE_ERRORS) else 1)


def _format_row(coords, value: float) -> str:
    return " ".join(f"{c:.12g}" for c in coords) + f" {value:.16g}"


@app.command("solve")
def solve(
    mesh: str = typer.Option(..., "--mesh", help="interval:N, square:N or file:PATH."),
    bc: str = typer.Option("dirichlet", "--bc", help="dirichlet or neumann."),
    beta: float = typer.Option(..., "--beta", help="Fractional order, > 0."),
    ip: str = typer.Option("lumped", "--ip", help="Inner product: exact, lumped or banded:<i>."),
    load: str = typer.Option("box", "--load", help="Load vector: fem or box."),
    form: str = typer.Option(
        "box-averaged", "--form", help="Bilinear form: exact-galerkin, box-averaged or q-quadrature."
    ),
    method: str = typer.Option("sinc", "--method", help="eig, contour or sinc."),
    sinc_k: float = typer.Option(FRACOP_DEFAULTS["SINC"]["k"], "--sinc-k", help="Sinc step size."),
    sinc_n: Optional[int] = typer.Option(None, "--sinc-n", help="Symmetric sinc node range -N..N."),
    n_line: int = typer.Option(FRACOP_DEFAULTS["CONTOUR"]["n_line"], "--n-line", help="Contour line nodes."),
    n_circle: int = typer.Option(FRACOP_DEFAULTS["CONTOUR"]["n_circle"], "--n-circle", help="Contour circle nodes."),
    f: str = typer.Option("indicator", "--f", help="indicator, singular, checkerboard or constant-one."),
    kappa: float = typer.Option(1.0, "--kappa", help="Constant reaction coefficient."),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="Write the solution here instead of stdout."),
    export: Optional[Path] = typer.Option(None, "--export", help="Also export K, M, F and FQ to this directory."),
):
    """Solve L^beta u = f once and print `x [y] value` per unknown."""
    try:
        mesh_spec = parse_mesh_spec(mesh)
        frac_method = parse_method(method, k=sinc_k, N=sinc_n, n_line=n_line, n_circle=n_circle)
        spec = validate_frac_spec(beta, ip, form, load, frac_method)
        primal = build_mesh(mesh_spec, bc)
        load_function = select_load(f, primal.dim)
        dual = build_dual_cells(primal)
        bundle = assemble_bundle(primal, dual, CoefficientField(kappa=kappa), spec.bilinear_form, spec.inner_product, load_function)
        result = frac_solve_report(bundle, spec)
        exported = export_bundle(bundle, export) if export else []
    except Exception as exc:
        raise _fail(exc)

    lines = [
        _format_row(primal.vertices[vertex], value)
        for vertex, value in zip(primal.active_vertices, result.values)
    ]
    text = "\n".join(lines) + "\n"
    if output:
        output.parent.mkdir(parents=True, exist_ok=True)
        output.write_text(text, encoding="utf-8")
    else:
        typer.echo(text, nl=False)

    report = result.report
    typer.echo(
        f"{describe_method(frac_method)}: {primal.n_active} unknowns, {report.solves} shifted solves, "
        f"max residual {report.max_residual:.2e}",
        err=True,
    )
    for path in exported:
        typer.echo(f"exported {path}", err=True)


@app.command("experiment")
def experiment(
    config: str = typer.Argument(..., help="Config file path or bundled name (indicator1d, singular1d, checker2d)."),
    overrides: Optional[List[str]] = typer.Argument(None, help="key=value pairs applied after the file."),
):
    """Run a refinement study and write its EOC table."""
    try:
        spec = load_experiment_config(config, overrides or [])
        if len(spec.inner_products) > 1:
            comparison = compare_inner_products(spec)
            report = comparison.report
        else:
            comparison = None
            report = run_experiment(spec)
    except Exception as exc:
        raise _fail(exc)

    if spec.output_path:
        write_csv(report, spec.output_path)
    else:
        typer.echo(format_csv(report), nl=False)
    for line in summarize(report):
        typer.echo(line)
    if comparison is not None:
        for beta in spec.betas:
            typer.echo(
                f"{spec.name} beta={beta:g}: max terminal EOC difference {comparison.max_difference(beta):.3f}, "
                f"max nodal spread {comparison.solution_spread[beta]:.3e}"
            )

    if report.failures:
        first = report.failures[0]
        typer.secho(
            f"Error: row beta={first.beta:g} {first.inner_product} level {first.level} failed: {first.failure}",
            fg=typer.colors.RED,
            err=True,
        )
        raise typer.Exit(code=1)


@app.command("verify")
def verify(
    suite: str = typer.Argument("all", help="geometry, loewner, projection, intrinsic, spectral or all."),
):
    """Run property suites at fixed small scale."""
    try:
        results = run_suite(suite)
    except Exception as exc:
        raise _fail(exc)

    for result in results:
        status = "PASS" if result.passed else "FAIL"
        typer.echo(f"{status} {result.suite}: {result.name} ({result.detail})")
    failed = sum(not result.passed for result in results)
    typer.echo(f"{len(results) - failed} of {len(results)} properties passed")
    if failed:
        raise typer.Exit(code=1)


@app.command("mesh-info")
def mesh_info(
    mesh: str = typer.Option(..., "--mesh", help="interval:N, square:N or file:PATH."),
    bc: str = typer.Option("dirichlet", "--bc", help="dirichlet or neumann."),
):
    """Print sizes, h and the dual-cell partition defect of a mesh."""
    try:
        primal = build_mesh(parse_mesh_spec(mesh), bc)
        dual = build_dual_cells(primal)
    except Exception as exc:
        raise _fail(exc)

    typer.echo(f"dim: {primal.dim}")
    typer.echo(f"boundary condition: {primal.bc.value}")
    typer.echo(f"vertices: {primal.n_vertices}")
    typer.echo(f"elements: {primal.n_elements}")
    typer.echo(f"active vertices: {primal.n_active}")
    typer.echo(f"h: {mesh_size(primal):.12g}")
    typer.echo(f"domain measure: {primal.domain_measure:.12g}")
    typer.echo(f"dual partition defect: {dual.partition_defect(primal.domain_measure):.3e}")


def cli():
    """Entry point for the CLI."""
    app()
