from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import integrate
from scipy.sparse import linalg as spla

from fracbox.assembly import CoefficientField, assemble_bundle
from fracbox.fracop import EigOracle, validate_frac_spec
from fracbox.mesh import build_dual_cells, build_uniform_interval
from fracbox.reference import (
    CoefficientCache,
    MemoryGuardError,
    OverkillReference,
    ReferenceValidationError,
    checkerboard,
    checkerboard_load,
    evaluate_structured,
    full_values,
    indicator_solution,
    l2_error,
    overkill_solve,
    select_load,
    series_error,
    sine_moments,
    singular_load,
    singular_solution,
    structured_mesh,
)


def _linear(points):
    points = np.atleast_2d(points)
    return 1.0 + 2.0 * points[:, 0] + (3.0 * points[:, 1] if points.shape[1] > 1 else 0.0)


def test_indicator_series_boundary_and_truncation():
    solution = indicator_solution(1.0)
    assert solution.truncation_N == 8000
    np.testing.assert_allclose(solution(np.array([0.0, 1.0])), 0.0, atol=1e-12)
    finer = indicator_solution(1.0, 16000)
    x = np.array([0.25, 0.5, 0.75])
    np.testing.assert_allclose(solution(x), finer(x), rtol=0, atol=1e-8)
    assert solution(np.array([0.25]))[0] > solution(np.array([0.75]))[0] > 0


def test_series_accepts_point_arrays():
    solution = indicator_solution(0.5, 100)
    x = np.linspace(0.0, 1.0, 600)
    np.testing.assert_allclose(solution(x[:, None]), solution(x), rtol=0, atol=0)


def test_tail_envelope_is_monotone():
    envelope = indicator_solution(0.75, 400).tail_envelope(10)
    assert envelope.shape == (391,)
    assert np.all(np.diff(envelope) <= 0)


def test_invalid_truncation():
    with pytest.raises(ReferenceValidationError):
        indicator_solution(0.5, 0)


def test_sine_moment_against_substitution():
    # x = s^2 removes the endpoint singularity of x^-0.499
    expected, _ = integrate.quad(lambda s: 2.0 * s**0.002 * math.sin(math.pi * s * s), 0.0, 1.0, epsabs=1e-14, limit=200)
    assert sine_moments(4)[0] == pytest.approx(expected, abs=1e-9)


def test_sine_moments_are_read_only():
    moments = sine_moments(8)
    with pytest.raises(ValueError):
        moments[0] = 0.0


def test_singular_series_endpoints(tmp_path):
    solution = singular_solution(1.0, 500, cache_dir=tmp_path)
    values = solution(np.array([0.0, 1.0]))
    assert abs(values[0]) <= 1e-12
    assert abs(values[1]) <= 1e-10
    assert solution(np.array([0.5]))[0] > 0


def test_coefficient_cache_round_trip(tmp_path):
    first = singular_solution(0.5, 200, cache_dir=tmp_path)
    cache = CoefficientCache(tmp_path)
    path = cache.path_for("singular_a-0.499_k1.0", 0.5, 200)
    assert path.is_file()
    assert path.read_text(encoding="utf-8").splitlines()[0] == "0.5 200"
    second = singular_solution(0.5, 200, cache_dir=tmp_path)
    np.testing.assert_array_equal(first.coefficients, second.coefficients)


def test_coefficient_cache_ignores_mismatched_files(tmp_path):
    cache = CoefficientCache(tmp_path)
    cache.set("demo", 0.5, 3, np.array([1.0, 2.0, 3.0]))
    np.testing.assert_array_equal(cache.get("demo", 0.5, 3), [1.0, 2.0, 3.0])
    path = cache.path_for("demo", 0.5, 3)
    path.write_text("0.75 3\n1.0\n2.0\n3.0\n", encoding="utf-8")
    assert cache.get("demo", 0.5, 3) is None
    path.write_text("0.5 3\n1.0\n2.0\n", encoding="utf-8")
    assert cache.get("demo", 0.5, 3) is None
    path.write_text("0.5 3\n1.0\nx\n3.0\n", encoding="utf-8")
    assert cache.get("demo", 0.5, 3) is None
    assert cache.get("missing", 0.5, 3) is None


def test_loads():
    assert checkerboard_load((0.25, 0.25)) == -1.0
    assert checkerboard_load((0.75, 0.25)) == 1.0
    assert checkerboard_load((0.5, 0.3)) == 0.0
    points = np.array([[0.25, 0.75], [0.75, 0.75]])
    np.testing.assert_array_equal(checkerboard()(points), [1.0, -1.0])
    assert select_load(" Indicator ").name == "indicator"
    assert select_load("checkerboard", 2).name == "checkerboard"
    with pytest.raises(ReferenceValidationError):
        select_load("checkerboard", 1)
    with pytest.raises(ReferenceValidationError):
        select_load("gaussian")
    with pytest.raises(ReferenceValidationError):
        singular_load(-1.0)


def test_l2_error_basics(interval16, square4):
    neumann = build_uniform_interval(8, "neumann")
    assert l2_error(neumann, np.zeros(9), lambda p: np.ones(p.shape[0])) == pytest.approx(1.0, rel=1e-14)
    assert l2_error(neumann, _linear(neumann.vertices), _linear) <= 1e-14

    mesh, _ = square4
    assert l2_error(mesh, _linear(mesh.vertices), _linear) <= 1e-13
    assert l2_error(mesh, np.zeros(25), lambda p: np.ones(p.shape[0])) == pytest.approx(1.0, rel=1e-13)

    mesh, _ = interval16
    # the zero boundary values are filled in for active-only input
    x = mesh.vertices[:, 0]
    active = x[mesh.active_vertices] * (1.0 - x[mesh.active_vertices])
    assert l2_error(mesh, active, lambda p: p[:, 0] * (1.0 - p[:, 0])) < 2e-3
    with pytest.raises(ReferenceValidationError):
        full_values(mesh, np.zeros(5))


def test_series_error_needs_interval(square4):
    mesh, _ = square4
    with pytest.raises(ReferenceValidationError):
        series_error(mesh, np.zeros(25), indicator_solution(0.5, 10))


def test_series_error_of_interpolant_decreases():
    solution = indicator_solution(1.0, 4000)
    errors = []
    for n in (16, 32, 64):
        mesh = build_uniform_interval(n, "dirichlet")
        errors.append(series_error(mesh, solution(mesh.vertices), solution))
    assert errors[0] > errors[1] > errors[2]
    assert errors[1] / errors[2] == pytest.approx(4.0, rel=0.15)


def test_evaluate_structured_is_exact_for_linear_functions():
    rng = np.random.default_rng(3)
    points = rng.random((50, 2))
    mesh = structured_mesh(2, 2, "neumann")
    grid = _linear(mesh.vertices).reshape(5, 5)
    np.testing.assert_allclose(evaluate_structured(grid, points), _linear(points), rtol=1e-14)
    interval = structured_mesh(3, 1, "neumann")
    values = _linear(interval.vertices)
    np.testing.assert_allclose(evaluate_structured(values, points[:, :1]), _linear(points[:, :1]), rtol=1e-14)


def test_structured_mesh_validation():
    with pytest.raises(ReferenceValidationError):
        structured_mesh(0, 2, "neumann")
    with pytest.raises(ReferenceValidationError):
        structured_mesh(2, 3, "neumann")


@pytest.mark.parametrize("dim", [1, 2])
def test_overkill_transfers(dim):
    fine = structured_mesh(4, dim, "neumann")
    reference = OverkillReference(fine_mesh_level=4, nodal_values=_linear(fine.vertices), mesh=fine)
    np.testing.assert_array_equal(reference.restrict(4), reference.nodal_values)
    coarse = structured_mesh(2, dim, "neumann")
    np.testing.assert_allclose(reference.restrict(2), _linear(coarse.vertices), rtol=1e-14)
    np.testing.assert_allclose(reference.prolongate(_linear(coarse.vertices), 2), reference.nodal_values, rtol=1e-14)
    assert reference.l2_error(coarse, _linear(coarse.vertices), 2) <= 1e-12
    assert reference.l2_error(coarse, _linear(coarse.vertices) + 1.0, 2) == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(ReferenceValidationError):
        reference.restrict(5)
    with pytest.raises(ReferenceValidationError):
        reference.l2_error(structured_mesh(3, dim, "neumann"), np.zeros(3), 2)


def test_overkill_solve_matches_direct_solve():
    spec = validate_frac_spec(0.5, "lumped", method=EigOracle())
    reference = overkill_solve(3, 1.0, spec, checkerboard())
    mesh = structured_mesh(3, 2, "neumann")
    bundle = assemble_bundle(mesh, build_dual_cells(mesh), CoefficientField(), "box-averaged", "lumped", checkerboard())
    direct = spla.spsolve(bundle.K.tocsc(), bundle.FQ)
    np.testing.assert_allclose(reference.nodal_values, direct, rtol=1e-10, atol=1e-13)
    assert not reference.nodal_values.flags.writeable
    # the mesh and the checkerboard are both symmetric under x <-> y
    grid = reference.nodal_values.reshape(9, 9)
    np.testing.assert_allclose(grid, grid.T, rtol=0, atol=1e-12)


def test_overkill_memory_guard():
    spec = validate_frac_spec(0.5, "lumped", method=EigOracle())
    with pytest.raises(MemoryGuardError) as info:
        overkill_solve(3, 0.5, spec, checkerboard(), max_unknowns=10)
    assert info.value.unknowns == 81
    with pytest.raises(MemoryGuardError):
        overkill_solve(3, 0.5, spec, checkerboard(), dense_limit=50)
