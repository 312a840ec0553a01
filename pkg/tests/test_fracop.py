from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.sparse import linalg as spla

from fracbox.assembly import CoefficientField, InnerProduct, assemble_bundle, assemble_mass, assemble_stiffness
from fracbox.fracop import (
    Contour,
    EigOracle,
    FracOpValidationError,
    LoadKind,
    Pencil,
    Sinc,
    SpectralBracketError,
    apply_frac_inverse,
    describe_method,
    extremal_eigenvalues,
    frac_solve,
    frac_solve_report,
    generalized_eig,
    intrinsic_box_solve,
    parse_method,
    ph_projection_tests,
    qt_operator,
    qt_symmetry_defect,
    run_frac_inverse,
    sinc_scalar,
    sinc_tail_rates,
    solve_mass,
    spectral_bounds,
    validate_beta,
    validate_frac_spec,
)
from fracbox.mesh import build_dual_cells, build_uniform_interval, mesh_size
from fracbox.reference import checkerboard, indicator_load


def _bundle(mesh, dual, ip="lumped", form="box-averaged"):
    return assemble_bundle(mesh, dual, CoefficientField(), form, ip, indicator_load())


def _relative(a, b):
    return float(np.max(np.abs(a - b)) / np.max(np.abs(b)))


def test_parse_method():
    assert isinstance(parse_method("eig"), EigOracle)
    sinc = parse_method("SINC", k=0.3, N=None, n_line=10)
    assert sinc == Sinc(k=0.3)
    contour = parse_method("contour", n_line=40, n_circle=16, k=0.5)
    assert (contour.n_line, contour.n_circle) == (40, 16)
    assert describe_method(contour) == "contour(n_line=40, n_circle=16)"
    assert describe_method(Sinc(k=0.25, N=10)) == "sinc(k=0.25, N=10)"
    with pytest.raises(FracOpValidationError):
        parse_method("pade")


@pytest.mark.parametrize(
    "factory",
    [
        lambda: Sinc(k=0.0),
        lambda: Sinc(N=0),
        lambda: Contour(n_circle=1),
        lambda: Contour(n_line=0),
        lambda: Contour(r=2.0, R=1.0),
        lambda: Contour(r=-1.0),
    ],
)
def test_invalid_method_parameters(factory):
    with pytest.raises(FracOpValidationError):
        factory()


def test_sinc_node_range_balances_tails():
    method = Sinc(k=0.2)
    assert method.node_range(0.5) == (-124, 42)
    assert method.node_range(0.25) == (-50, 83)
    assert method.node_range(0.25, lambda_max=math.exp(10.0)) == (-70, 83)
    assert method.node_range(0.75, lambda_max=math.exp(10.0)) == method.node_range(0.75)
    assert Sinc(k=0.2, N=7).node_range(0.3) == (-7, 7)
    assert method.error_estimate() == pytest.approx(math.exp(-(math.pi**2) / 0.4))


@pytest.mark.parametrize("fraction", [1e-7, 0.02, 0.98, 1.0 - 1e-7])
def test_sinc_node_range_is_bounded_near_integers(fraction):
    lower_rate, upper_rate = sinc_tail_rates(fraction)
    assert min(lower_rate, upper_rate) >= 0.5
    lower, upper = Sinc(k=0.2).node_range(fraction, lambda_max=1e6)
    assert upper - lower + 1 < 200


def test_sinc_node_count_is_capped():
    with pytest.raises(FracOpValidationError):
        Sinc(k=0.01).node_range(0.5)
    with pytest.raises(FracOpValidationError):
        Sinc(N=10_000).node_range(0.5)


def test_sinc_scalar_rule():
    lam = np.geomspace(1.0, 100.0, 25)
    for beta in (0.02, 0.25, 0.5, 0.75, 0.98):
        approx = sinc_scalar(lam, beta, Sinc(k=0.2))
        np.testing.assert_allclose(approx, lam**-beta, rtol=1e-8)


@pytest.mark.parametrize("beta", [0, -0.5, math.nan, math.inf])
def test_validate_beta(beta):
    with pytest.raises(FracOpValidationError):
        validate_beta(beta)


def test_mixed_inner_product_rejected():
    with pytest.raises(FracOpValidationError) as info:
        validate_frac_spec(0.5, "mixed")
    assert "selfadjoint" in info.value.message


def test_load_kind_parse():
    assert LoadKind.parse(" FEM ") is LoadKind.FEM
    with pytest.raises(FracOpValidationError):
        LoadKind.parse("dual")


def test_bundle_spec_mismatch(interval16):
    mesh, dual = interval16
    bundle = _bundle(mesh, dual, "exact")
    with pytest.raises(FracOpValidationError):
        frac_solve(bundle, validate_frac_spec(0.5, "lumped"))
    with pytest.raises(FracOpValidationError):
        frac_solve(bundle, validate_frac_spec(0.5, "exact", bilinear_form="exact-galerkin"))


def test_generalized_eigenvalues_match_closed_form():
    n = 16
    h = 1.0 / n
    mesh = build_uniform_interval(n, "dirichlet")
    dual = build_dual_cells(mesh)
    K = assemble_stiffness(mesh, dual, CoefficientField(), "box-averaged")
    M = assemble_mass(mesh, dual, "lumped")
    j = np.arange(1, n)
    expected = 4.0 / h**2 * np.sin(j * np.pi * h / 2) ** 2 + 1.0
    decomposition = generalized_eig(K, M)
    np.testing.assert_allclose(decomposition.eigenvalues, expected, rtol=1e-12)
    rhs = np.linspace(0.0, 1.0, n - 1)
    np.testing.assert_allclose(decomposition.apply_function(np.ones(n - 1), rhs), rhs, atol=1e-12)
    with pytest.raises(FracOpValidationError):
        generalized_eig(K, M, dense_limit=10)


def test_extremal_eigenvalues_sparse_path():
    mesh = build_uniform_interval(512, "dirichlet")
    dual = build_dual_cells(mesh)
    K = assemble_stiffness(mesh, dual, CoefficientField(), "box-averaged")
    M = assemble_mass(mesh, dual, "exact")
    sparse_bounds = extremal_eigenvalues(K, M)
    dense = generalized_eig(K, M).eigenvalues
    assert sparse_bounds.lambda_min == pytest.approx(dense[0], rel=1e-6)
    assert sparse_bounds.lambda_max == pytest.approx(dense[-1], rel=1e-6)
    level = spectral_bounds(K, M, mesh_size(mesh))
    assert level.scaled_max == pytest.approx(dense[-1] / 512**2, rel=1e-6)
    assert level.lambda_min == pytest.approx(math.pi**2 + 1.0, rel=1e-3)


def test_beta_one_is_a_plain_solve(interval16):
    mesh, dual = interval16
    bundle = _bundle(mesh, dual, "exact")
    direct = spla.spsolve(bundle.K.tocsc(), bundle.FQ)
    for method in (EigOracle(), Sinc()):
        values = frac_solve(bundle, validate_frac_spec(1.0, "exact", method=method))
        np.testing.assert_allclose(values, direct, rtol=1e-11)


@pytest.mark.parametrize("beta", [0.25, 0.5, 0.75, 1.7])
def test_quadratures_match_eigendecomposition(interval16, beta):
    mesh, dual = interval16
    bundle = _bundle(mesh, dual, "exact")
    exact = frac_solve(bundle, validate_frac_spec(beta, "exact", method=EigOracle()))
    for method in (Sinc(), Contour()):
        approx = frac_solve(bundle, validate_frac_spec(beta, "exact", method=method))
        assert _relative(approx, exact) < 1e-8, method


@pytest.mark.parametrize("beta", [0.02, 0.98, 1.98])
def test_sinc_near_integer_orders(interval16, beta):
    mesh, dual = interval16
    bundle = _bundle(mesh, dual, "lumped")
    exact = frac_solve(bundle, validate_frac_spec(beta, "lumped", method=EigOracle()))
    result = frac_solve_report(bundle, validate_frac_spec(beta, "lumped", method=Sinc()))
    assert np.all(np.isfinite(result.values))
    assert _relative(result.values, exact) < 1e-8
    assert result.report.solves < 200


@pytest.mark.parametrize(
    ("method", "rtol"),
    [(EigOracle(), 1e-10), (Sinc(), 1e-8), (Contour(), 1e-8)],
    ids=["eig", "sinc", "contour"],
)
def test_fractional_powers_compose(interval16, method, rtol):
    mesh, dual = interval16
    bundle = _bundle(mesh, dual, "exact")
    first = frac_solve(bundle, validate_frac_spec(0.7, "exact", method=method))
    composed = apply_frac_inverse(Pencil(bundle.K, bundle.M), 1.6, first, method)
    direct = frac_solve(bundle, validate_frac_spec(2.3, "exact", method=method))
    assert _relative(composed, direct) < rtol


@pytest.mark.parametrize("method", [EigOracle(), Sinc(), Contour()], ids=["eig", "sinc", "contour"])
def test_fractional_inverse_keeps_quadratic_form_positive(interval16, method):
    mesh, dual = interval16
    bundle = _bundle(mesh, dual, "lumped")
    pencil = Pencil(bundle.K, bundle.M)
    rng = np.random.default_rng(7)
    for _ in range(20):
        rhs = rng.standard_normal(pencil.n)
        values = apply_frac_inverse(pencil, 0.3, rhs, method)
        assert rhs @ (bundle.M @ values) > 0.0


def test_sinc_report_counts_solves(interval16):
    mesh, dual = interval16
    bundle = _bundle(mesh, dual)
    result = frac_solve_report(bundle, validate_frac_spec(0.5, "lumped", method=Sinc(k=0.4)))
    lower, upper = Sinc(k=0.4).node_range(0.5)
    # one extra solve for the L^-1 reference term
    assert result.report.solves == upper - lower + 2
    assert result.report.max_residual < 1e-10
    two = frac_solve_report(bundle, validate_frac_spec(2.0, "lumped", method=Sinc()))
    assert two.report.solves == 2
    small = frac_solve_report(bundle, validate_frac_spec(0.3, "lumped", method=Sinc(k=0.4, N=12)))
    assert small.report.solves == 25


def test_contour_rejects_bad_bracket(interval16):
    mesh, dual = interval16
    bundle = _bundle(mesh, dual)
    with pytest.raises(SpectralBracketError):
        frac_solve(bundle, validate_frac_spec(0.5, "lumped", method=Contour(r=1e6)))


def test_run_frac_inverse_targets(interval16):
    mesh, dual = interval16
    bundle = _bundle(mesh, dual, "exact")
    rhs = solve_mass(bundle.M, bundle.FQ)
    pencil = Pencil(bundle.K, bundle.M)
    from_pencil = apply_frac_inverse(pencil, 0.5, rhs, EigOracle())
    from_decomposition = apply_frac_inverse(pencil.decomposition, 0.5, rhs, EigOracle())
    from_tuple = run_frac_inverse((bundle.K, bundle.M), 0.5, rhs, EigOracle()).values
    np.testing.assert_allclose(from_decomposition, from_pencil, rtol=1e-14)
    np.testing.assert_allclose(from_tuple, from_pencil, rtol=1e-14)
    with pytest.raises(FracOpValidationError):
        apply_frac_inverse(pencil.decomposition, 0.5, rhs, Sinc())
    with pytest.raises(FracOpValidationError):
        apply_frac_inverse(pencil, 0.5, rhs[:-1], EigOracle())


def test_solve_mass_diagonal_and_general(interval16):
    mesh, dual = interval16
    vector = np.arange(1.0, 16.0)
    lumped = assemble_mass(mesh, dual, "lumped")
    exact = assemble_mass(mesh, dual, "exact")
    np.testing.assert_allclose(lumped @ solve_mass(lumped, vector), vector, rtol=1e-14)
    np.testing.assert_allclose(exact @ solve_mass(exact, vector), vector, rtol=1e-12)


@pytest.mark.parametrize("beta", [0.3, 0.5, 1.0, 1.7])
def test_intrinsic_box_solve_equals_lumped_solve(interval16, beta):
    mesh, dual = interval16
    bundle = _bundle(mesh, dual, "lumped")
    lumped = frac_solve(bundle, validate_frac_spec(beta, "lumped", method=EigOracle()))
    np.testing.assert_allclose(intrinsic_box_solve(bundle, dual, beta), lumped, rtol=0, atol=1e-9)


def test_intrinsic_needs_lumped_bundle(interval16):
    mesh, dual = interval16
    with pytest.raises(FracOpValidationError):
        qt_operator(_bundle(mesh, dual, "exact"), dual)
    assert qt_symmetry_defect(_bundle(mesh, dual, "lumped"), dual) < 1e-10


def test_intrinsic_on_square(square4):
    mesh, dual = square4
    bundle = assemble_bundle(mesh, dual, CoefficientField(), "box-averaged", "lumped", checkerboard())
    lumped = frac_solve(bundle, validate_frac_spec(0.5, "lumped", method=EigOracle()))
    np.testing.assert_allclose(intrinsic_box_solve(bundle, dual, 0.5), lumped, rtol=0, atol=1e-9)


def test_inner_product_dependence(interval16):
    mesh, dual = interval16
    exact = frac_solve(_bundle(mesh, dual, "exact"), validate_frac_spec(0.5, "exact", method=EigOracle()))
    lumped = frac_solve(_bundle(mesh, dual, "lumped"), validate_frac_spec(0.5, "lumped", method=EigOracle()))
    assert np.max(np.abs(exact - lumped)) > 1e-6


def test_projection_laws(interval16, square4):
    for mesh, dual in (interval16, square4):
        report = ph_projection_tests(mesh, dual)
        assert report.check("mixed").is_identity
        for label in ("exact", "lumped", "banded:1"):
            assert not report.check(label).is_identity
            assert report.check(label).kernel_defect <= 1e-8
        assert report.witness.gap > 1e-8
        assert report.passed


def test_projection_with_custom_inner_products(interval16):
    mesh, dual = interval16
    report = ph_projection_tests(mesh, dual, [InnerProduct.mixed(), InnerProduct.banded(0)], n_test_functions=2)
    assert [c.inner_product for c in report.checks] == ["mixed", "banded:0"]
