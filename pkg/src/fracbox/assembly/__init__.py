"""Stiffness, inner-product matrices and load vectors."""

from .bundle import OperatorBundle, assemble_bundle, export_bundle
from .coefficients import CoefficientField, laplacian_coefficients
from .consistency import RatioBounds, inner_product_consistency, q_norm_equivalence
from .errors import (
    AssemblyError,
    AssemblyValidationError,
    CoefficientError,
    IntegrationError,
    format_error_for_user,
)
from .forms import (
    BilinearFormKind,
    InnerProduct,
    InnerProductKind,
    assemble_mass,
    assemble_stiffness,
    banded,
    lump,
)
from .loads import LoadFunction, as_load, assemble_load_box, assemble_load_fem, box_integrals
from .quadrature import adaptive_triangles, graded_quad, integrate_elements, integrate_segment

__all__ = [
    "AssemblyError",
    "AssemblyValidationError",
    "BilinearFormKind",
    "CoefficientError",
    "CoefficientField",
    "InnerProduct",
    "InnerProductKind",
    "IntegrationError",
    "LoadFunction",
    "OperatorBundle",
    "RatioBounds",
    "adaptive_triangles",
    "as_load",
    "assemble_bundle",
    "assemble_load_box",
    "assemble_load_fem",
    "assemble_mass",
    "assemble_stiffness",
    "banded",
    "box_integrals",
    "export_bundle",
    "format_error_for_user",
    "graded_quad",
    "inner_product_consistency",
    "integrate_elements",
    "integrate_segment",
    "laplacian_coefficients",
    "lump",
    "q_norm_equivalence",
]
