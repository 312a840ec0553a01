"""End-to-end checks of the benchmark claims. Refinement studies are marked slow."""

from __future__ import annotations

import math

import numpy as np
import pytest

from fracbox.assembly import CoefficientField, assemble_bundle, assemble_mass
from fracbox.fracop import Contour, EigOracle, Sinc, frac_solve, validate_frac_spec
from fracbox.harness import compare_inner_products, load_experiment_config, run_experiment
from fracbox.mesh import build_dual_cells, build_uniform_interval
from fracbox.reference import indicator_load, indicator_solution, singular_solution

BETAS = (0.25, 0.5, 0.75)


def _indicator_problem(n, inner_product):
    mesh = build_uniform_interval(n, "dirichlet")
    dual = build_dual_cells(mesh)
    return assemble_bundle(mesh, dual, CoefficientField(), "box-averaged", inner_product, indicator_load())


def test_beta_one_removes_the_inner_product():
    solutions = [
        frac_solve(_indicator_problem(32, ip), validate_frac_spec(1.0, ip, method=EigOracle()))
        for ip in ("exact", "lumped", "banded:1")
    ]
    for other in solutions[1:]:
        assert np.max(np.abs(other - solutions[0])) <= 1e-11

    exact = frac_solve(_indicator_problem(16, "exact"), validate_frac_spec(0.5, "exact", method=EigOracle()))
    lumped = frac_solve(_indicator_problem(16, "lumped"), validate_frac_spec(0.5, "lumped", method=EigOracle()))
    assert np.max(np.abs(exact - lumped)) > 1e-6


def _method_errors(beta, methods):
    mesh = build_uniform_interval(64, "dirichlet")
    dual = build_dual_cells(mesh)
    bundle = assemble_bundle(mesh, dual, CoefficientField(), "box-averaged", "exact", indicator_load())
    mass = assemble_mass(mesh, dual, "exact")
    oracle = frac_solve(bundle, validate_frac_spec(beta, "exact", method=EigOracle()))
    scale = math.sqrt(oracle @ (mass @ oracle))
    errors = []
    for method in methods:
        diff = frac_solve(bundle, validate_frac_spec(beta, "exact", method=method)) - oracle
        errors.append(math.sqrt(max(diff @ (mass @ diff), 0.0)) / scale)
    return errors


def _assert_exponential(errors):
    logs = np.log(errors)
    assert np.all(np.diff(logs) < 0), errors
    assert (logs[0] - logs[-1]) / (len(errors) - 1) >= 1.0, errors
    assert errors[-1] <= 1e-8, errors


@pytest.mark.parametrize("beta", BETAS)
def test_contour_converges_exponentially(beta):
    methods = [Contour(n_line=4 * n, n_circle=n) for n in range(16, 57, 8)]
    _assert_exponential(_method_errors(beta, methods))


@pytest.mark.parametrize("beta", BETAS)
def test_sinc_converges_exponentially(beta):
    methods = [Sinc(k=1.0 / inverse) for inverse in (1.6, 2.2, 2.8, 3.4, 4.0, 4.6)]
    _assert_exponential(_method_errors(beta, methods))


def test_series_truncation_is_stable():
    x = np.linspace(0.0, 1.0, 257)
    coarse = indicator_solution(0.4, 8000)(x)
    fine = indicator_solution(0.4, 16000)(x)
    # slowest decaying case: coefficients fall like n^-1.8
    assert np.max(np.abs(coarse - fine)) < 5e-4
    singular = singular_solution(1.0, 2000, use_cache=False)(x)
    singular_fine = singular_solution(1.0, 4000, use_cache=False)(x)
    assert np.max(np.abs(singular - singular_fine)) < 1e-5


@pytest.mark.slow
def test_indicator_rates():
    spec = load_experiment_config("indicator1d", ["output_path="])
    box = run_experiment(spec)
    fem = run_experiment(load_experiment_config("indicator1d", ["output_path=", "load=fem"]))
    assert not box.failures
    for beta in spec.betas:
        assert box.within_band(beta, "lumped", tolerance=0.15), (beta, box.terminal_eoc(beta))
    for a, b in zip(box.rows, fem.rows):
        assert a.l2_error == pytest.approx(b.l2_error, rel=1e-9)


def test_indicator_loads_coincide():
    bundle = _indicator_problem(2**9, "lumped")
    np.testing.assert_allclose(bundle.F, bundle.FQ, rtol=0, atol=1e-12)


@pytest.mark.slow
def test_singular_rates():
    box = run_experiment(load_experiment_config("singular1d", ["output_path="]))
    fem = run_experiment(load_experiment_config("singular1d", ["output_path=", "load=fem"]))
    box_rate = box.terminal_eoc(1.0)
    assert 1.5 < box_rate < 2.0
    assert fem.terminal_eoc(1.0) >= box_rate - 0.05


@pytest.mark.slow
def test_checkerboard_rates():
    spec = load_experiment_config("checker2d", ["output_path="])
    comparison = compare_inner_products(spec)
    report = comparison.report
    assert not report.failures
    for beta in spec.betas:
        assert comparison.max_difference(beta) <= 0.1
        for ip in spec.inner_products:
            assert report.within_band(beta, ip.label, tolerance=0.2), (beta, ip.label, report.terminal_eoc(beta, ip.label))
