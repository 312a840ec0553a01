"""Refinement studies, EOC reports and property suites."""

from .config import bundled_configs, load_experiment_config, parse_config_text, parse_overrides, spec_from_entries
from .eoc import eoc, theoretical_rate
from .errors import ConfigFileError, HarnessError, HarnessValidationError, format_error_for_user
from .report import format_csv, summarize, write_csv
from .runner import (
    InnerProductComparison,
    build_references,
    compare_inner_products,
    quadrature_tolerance,
    run_experiment,
    solution_spread,
)
from .spec import EocReport, EocRow, ExperimentKind, ExperimentSpec, validate_experiment_spec
from .suites import SUITES, SuiteResult, run_suite

__all__ = [
    "SUITES",
    "ConfigFileError",
    "EocReport",
    "EocRow",
    "ExperimentKind",
    "ExperimentSpec",
    "HarnessError",
    "HarnessValidationError",
    "InnerProductComparison",
    "SuiteResult",
    "build_references",
    "bundled_configs",
    "compare_inner_products",
    "eoc",
    "format_csv",
    "format_error_for_user",
    "load_experiment_config",
    "parse_config_text",
    "parse_overrides",
    "quadrature_tolerance",
    "run_experiment",
    "run_suite",
    "solution_spread",
    "spec_from_entries",
    "summarize",
    "theoretical_rate",
    "validate_experiment_spec",
    "write_csv",
]
