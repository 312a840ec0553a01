from __future__ import annotations

import math

import pytest

from fracbox.fracop import Contour, EigOracle, LoadKind, Sinc
from fracbox.harness import (
    SUITES,
    ConfigFileError,
    ExperimentKind,
    HarnessValidationError,
    bundled_configs,
    compare_inner_products,
    eoc,
    format_csv,
    load_experiment_config,
    parse_config_text,
    parse_overrides,
    run_experiment,
    run_suite,
    spec_from_entries,
    summarize,
    theoretical_rate,
    validate_experiment_spec,
    write_csv,
)
from fracbox.harness.constants import CSV_HEADER


def _indicator_spec(**overrides):
    params = dict(
        name="indicator-small",
        experiment="indicator1d",
        betas=[1.0],
        levels=[3, 4, 5],
        inner_products=["lumped"],
        frac_method=EigOracle(),
        reference_terms=2000,
    )
    params.update(overrides)
    return validate_experiment_spec(**params)


def test_eoc_values():
    assert eoc([1.0, 0.25, 0.0625], [0.5, 0.25, 0.125]) == pytest.approx([2.0, 2.0])
    assert eoc([1.0, 0.0], [0.5, 0.25]) == [None]
    assert eoc([0.0, 0.0], [0.5, 0.25]) == [None]


@pytest.mark.parametrize(
    ("errors", "h_values"),
    [
        ([1.0], [0.5]),
        ([1.0, 0.5], [0.5]),
        ([1.0, 0.5], [0.25, 0.5]),
        ([1.0, 0.5], [0.5, 0.0]),
        ([1.0, -0.5], [0.5, 0.25]),
        ([1.0, math.nan], [0.5, 0.25]),
    ],
)
def test_eoc_rejects_bad_input(errors, h_values):
    with pytest.raises(HarnessValidationError):
        eoc(errors, h_values)


def test_theoretical_rates():
    box = LoadKind.BOX
    assert theoretical_rate(ExperimentKind.INDICATOR_1D, 0.4, box) == pytest.approx((1.3, 1.3))
    assert theoretical_rate(ExperimentKind.INDICATOR_1D, 1.0, box) == (2.0, 2.0)
    assert theoretical_rate(ExperimentKind.CHECKER_2D, 0.5, box) == (1.5, 1.5)
    assert theoretical_rate(ExperimentKind.SINGULAR_1D, 1.0, box) == (1.5, 2.0)
    assert theoretical_rate(ExperimentKind.SINGULAR_1D, 0.5, box) == (1.0, 1.0)
    assert theoretical_rate(ExperimentKind.SINGULAR_1D, 0.75, box) == (1.0, 1.5)
    assert theoretical_rate(ExperimentKind.SINGULAR_1D, 1.5, box) == (1.5, 2.0)
    assert theoretical_rate(ExperimentKind.SINGULAR_1D, 1.0, LoadKind.FEM) == (2.0, 2.0)


def test_experiment_spec_defaults():
    spec = validate_experiment_spec(name=" demo ", experiment="CHECKER2D", betas=[0.5])
    assert spec.name == "demo"
    assert spec.levels == (3, 4, 5, 6, 7)
    assert spec.experiment.dim == 2
    assert spec.frac_method == Sinc()
    assert [ip.label for ip in spec.inner_products] == ["lumped"]
    assert validate_experiment_spec(name="d", experiment="indicator1d", betas=[0.5]).levels == (3, 4, 5, 6, 7, 8, 9)


@pytest.mark.parametrize(
    "overrides",
    [
        {"name": " "},
        {"experiment": "wave"},
        {"betas": []},
        {"betas": [0.5, -1.0]},
        {"levels": [3]},
        {"levels": [0, 1]},
        {"levels": [4, 3]},
        {"inner_products": []},
        {"inner_products": ["mixed"]},
        {"inner_products": ["exact", "exact"]},
        {"inner_products": ["banded:-1"]},
        {"reference_terms": 0},
        {"max_workers": 0},
        {"guard_dense_limit": -1},
        {"load": "dual"},
        {"bilinear_form": "galerkin"},
        {"experiment": "checker2d", "levels": [3, 4], "overkill_level": 4},
    ],
)
def test_experiment_spec_validation(overrides):
    with pytest.raises(HarnessValidationError):
        _indicator_spec(**overrides)


def test_config_parsing():
    text = """
    # comment
    name = demo   # trailing comment
    experiment = indicator1d
    betas = 0.4, 0.75
    levels = 3..5
    method = contour
    contour_n_circle = 24
    """
    entries = parse_config_text(text)
    assert entries["levels"] == "3..5"
    spec = spec_from_entries(entries)
    assert spec.betas == (0.4, 0.75)
    assert spec.levels == (3, 4, 5)
    assert isinstance(spec.frac_method, Contour)
    assert spec.frac_method.n_circle == 24


@pytest.mark.parametrize(
    ("text", "line"),
    [
        ("name = a\nbogus = 1\n", 2),
        ("name = a\nname = b\n", 2),
        ("\n\nnot a pair\n", 3),
    ],
)
def test_config_errors_carry_line_numbers(text, line):
    with pytest.raises(ConfigFileError) as info:
        parse_config_text(text, "demo.cfg")
    assert info.value.line == line
    assert info.value.path == "demo.cfg"


def test_config_missing_and_bad_values():
    with pytest.raises(ConfigFileError):
        spec_from_entries({"name": "a", "experiment": "indicator1d"})
    with pytest.raises(ConfigFileError):
        spec_from_entries({"name": "a", "experiment": "indicator1d", "betas": "half"})
    with pytest.raises(ConfigFileError):
        parse_overrides(["levels"])
    with pytest.raises(ConfigFileError):
        parse_overrides(["colour=blue"])
    with pytest.raises(ConfigFileError):
        load_experiment_config("no-such-config")


def test_bundled_configs():
    assert bundled_configs() == ["checker2d", "indicator1d", "singular1d"]
    checker = load_experiment_config("checker2d")
    assert [ip.label for ip in checker.inner_products] == ["exact", "banded:0", "banded:1"]
    assert checker.overkill_level == 8
    assert checker.frac_method == Sinc(k=0.3)
    indicator = load_experiment_config("indicator1d.cfg", ["betas=1.0", "levels=3,4"])
    assert indicator.betas == (1.0,)
    assert indicator.levels == (3, 4)
    assert indicator.reference_terms == 8000
    singular = load_experiment_config("singular1d")
    assert singular.experiment is ExperimentKind.SINGULAR_1D


def test_config_from_file(tmp_path):
    path = tmp_path / "mine.cfg"
    path.write_text("name = mine\nexperiment = singular1d\nbetas = 1\nlevels = 2,3\n", encoding="utf-8")
    spec = load_experiment_config(path, ["output_path=" + str(tmp_path / "out.csv")])
    assert spec.name == "mine"
    assert spec.output_path == tmp_path / "out.csv"


def test_indicator_refinement_rate():
    report = run_experiment(_indicator_spec())
    rows = report.rows
    assert [row.level for row in rows] == [3, 4, 5]
    assert [row.dofs for row in rows] == [9, 17, 33]
    assert rows[0].eoc is None
    assert rows[0].l2_error > rows[1].l2_error > rows[2].l2_error > 0
    assert 1.7 < report.terminal_eoc(1.0) < 2.3
    assert report.within_band(1.0, "lumped", tolerance=0.3)
    assert not report.failures
    assert all(row.guard_tolerance == 0.0 and not row.flagged for row in rows)


def test_fem_and_box_loads_agree_for_the_indicator():
    # the jump sits on a vertex, where both loads integrate the same pieces
    box = run_experiment(_indicator_spec(betas=[0.5], levels=[3, 4]))
    fem = run_experiment(_indicator_spec(betas=[0.5], levels=[3, 4], load="fem"))
    for a, b in zip(box.rows, fem.rows):
        assert a.l2_error == pytest.approx(b.l2_error, rel=1e-6)
    assert fem.rows[0].load == "fem"


def test_rows_are_deterministic_across_workers():
    params = dict(betas=[0.5, 1.0], levels=[3, 4], inner_products=["lumped", "exact"])
    serial = run_experiment(_indicator_spec(**params))
    parallel = run_experiment(_indicator_spec(max_workers=3, **params))
    assert format_csv(serial) == format_csv(parallel)
    keys = [(row.beta, row.inner_product, row.level) for row in serial.rows]
    assert keys == [
        (0.5, "lumped", 3),
        (0.5, "lumped", 4),
        (0.5, "exact", 3),
        (0.5, "exact", 4),
        (1.0, "lumped", 3),
        (1.0, "lumped", 4),
        (1.0, "exact", 3),
        (1.0, "exact", 4),
    ]


def test_csv_output(tmp_path):
    report = run_experiment(_indicator_spec(levels=[3, 4]))
    lines = format_csv(report).splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 3
    first = lines[1].split(",")
    assert first[:6] == ["indicator1d", "1", "lumped", "box", "3", "9"]
    assert first[8] == ""
    assert float(first[9]) == 2.0
    path = write_csv(report, tmp_path / "nested" / "out.csv")
    assert path.read_text(encoding="utf-8") == format_csv(report)


def test_inner_products_coincide_at_beta_one():
    spec = _indicator_spec(levels=[3, 4], inner_products=["lumped", "exact", "banded:1"], frac_method=Sinc())
    comparison = compare_inner_products(spec)
    assert comparison.solution_spread[1.0] <= 1e-11
    assert comparison.max_difference(1.0) <= 1e-8
    assert set(comparison.terminal) == {(1.0, "lumped"), (1.0, "exact"), (1.0, "banded:1")}


def test_compare_needs_two_inner_products():
    with pytest.raises(HarnessValidationError):
        compare_inner_products(_indicator_spec())


def test_guard_flags_coarse_sinc_rule():
    report = run_experiment(_indicator_spec(betas=[0.5], levels=[3, 4], frac_method=Sinc(k=2.0)))
    assert report.flagged
    assert all(row.guard_tolerance > 0 for row in report.rows)
    lines = summarize(report)
    assert "quadrature-dominated" in lines[0]


def test_guard_uses_scalar_bound_above_dense_limit():
    report = run_experiment(_indicator_spec(betas=[0.5], levels=[3, 4], frac_method=Sinc(), guard_dense_limit=0))
    for row in report.rows:
        assert row.guard_tolerance is not None
        assert row.guard_tolerance < 1e-6
        assert not row.flagged


def test_contour_above_dense_limit_is_unbounded():
    spec = _indicator_spec(betas=[0.5], levels=[3, 4], frac_method=Contour(n_line=60, n_circle=24), guard_dense_limit=0)
    report = run_experiment(spec)
    assert all(row.guard_tolerance is None and not row.flagged for row in report.rows)


def test_overkill_level_barely_moves_checkerboard_rates():
    params = dict(
        name="checker-small",
        experiment="checker2d",
        betas=[0.75],
        levels=[1, 2],
        inner_products=["lumped"],
        frac_method=Sinc(k=0.3),
    )
    coarse = run_experiment(validate_experiment_spec(overkill_level=5, **params))
    fine = run_experiment(validate_experiment_spec(overkill_level=6, **params))
    assert not coarse.failures and not fine.failures
    assert abs(coarse.terminal_eoc(0.75) - fine.terminal_eoc(0.75)) < 0.05


def test_summarize():
    report = run_experiment(_indicator_spec(levels=[3, 4, 5]))
    (line,) = summarize(report, tolerance=0.3)
    assert line.startswith("indicator-small beta=1 lumped: terminal EOC ")
    assert line.endswith("theoretical 2 (ok)")


@pytest.mark.parametrize("name", sorted(SUITES))
def test_property_suites_pass(name):
    results = run_suite(name)
    assert results
    failed = [f"{r.name}: {r.detail}" for r in results if not r.passed]
    assert not failed, failed


def test_unknown_suite():
    with pytest.raises(HarnessValidationError):
        run_suite("everything")
