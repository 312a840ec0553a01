"""Discrete fractional operators L_h^-beta and the fractional solution maps."""

from .apply import FracReport, FracResult, Pencil, apply_frac_inverse, run_frac_inverse, sinc_scalar
from .eig import (
    LevelSpectrum,
    SpectralBounds,
    SpectralDecomposition,
    extremal_eigenvalues,
    generalized_eig,
    largest_eigenvalue,
    spectral_bounds,
)
from .errors import (
    FactorizationError,
    FracOpError,
    FracOpValidationError,
    SolverError,
    SpectralBracketError,
    format_error_for_user,
)
from .methods import Contour, EigOracle, FracMethod, Sinc, describe_method, parse_method, sinc_tail_rates
from .projection import AdjointWitness, ProjectionCheck, ProjectionReport, ph_projection_tests
from .solve import (
    frac_solve,
    frac_solve_report,
    intrinsic_box_solve,
    qt_operator,
    qt_symmetry_defect,
    solve_mass,
)
from .validators import FracSolveSpec, LoadKind, validate_beta, validate_frac_spec

__all__ = [
    "AdjointWitness",
    "Contour",
    "EigOracle",
    "FactorizationError",
    "FracMethod",
    "FracOpError",
    "FracOpValidationError",
    "FracReport",
    "FracResult",
    "FracSolveSpec",
    "LevelSpectrum",
    "LoadKind",
    "Pencil",
    "ProjectionCheck",
    "ProjectionReport",
    "Sinc",
    "SolverError",
    "SpectralBounds",
    "SpectralBracketError",
    "SpectralDecomposition",
    "apply_frac_inverse",
    "describe_method",
    "extremal_eigenvalues",
    "format_error_for_user",
    "frac_solve",
    "frac_solve_report",
    "generalized_eig",
    "intrinsic_box_solve",
    "largest_eigenvalue",
    "parse_method",
    "ph_projection_tests",
    "qt_operator",
    "qt_symmetry_defect",
    "run_frac_inverse",
    "sinc_scalar",
    "sinc_tail_rates",
    "solve_mass",
    "spectral_bounds",
    "validate_beta",
    "validate_frac_spec",
]
