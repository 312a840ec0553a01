"""Validation of fractional solve parameters."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import StrEnum

from ..assembly import BilinearFormKind, InnerProduct, InnerProductKind
from .errors import FracOpValidationError
from .methods import FracMethod, Sinc


class LoadKind(StrEnum):
    FEM = "fem"
    BOX = "box"

    @classmethod
    def parse(cls, value: str | LoadKind) -> LoadKind:
        try:
            return cls(str(value).strip().lower())
        except ValueError as exc:
            raise FracOpValidationError(f"Unknown load '{value}'. Options: fem, box", field="load", value=value) from exc


@dataclass(frozen=True)
class FracSolveSpec:
    beta: float
    method: FracMethod
    inner_product: InnerProduct
    bilinear_form: BilinearFormKind
    load: LoadKind


def validate_beta(beta: float) -> float:
    if not (math.isfinite(beta) and beta > 0):
        raise FracOpValidationError("beta must be positive", field="beta", value=beta)
    return float(beta)


def validate_frac_spec(
    beta: float,
    inner_product: InnerProduct | str,
    bilinear_form: BilinearFormKind | str = BilinearFormKind.BOX_AVERAGED,
    load: LoadKind | str = LoadKind.BOX,
    method: FracMethod | None = None,
) -> FracSolveSpec:
    beta = validate_beta(beta)
    inner_product = InnerProduct.parse(inner_product)
    if inner_product.kind is InnerProductKind.MIXED:
        raise FracOpValidationError(
            "the mixed inner product (x, Q y) does not give a selfadjoint realization of L_h; "
            "use it for projection checks only",
            field="inner_product",
            value=inner_product.label,
        )
    return FracSolveSpec(
        beta=beta,
        method=method if method is not None else Sinc(),
        inner_product=inner_product,
        bilinear_form=BilinearFormKind.parse(bilinear_form),
        load=LoadKind.parse(load),
    )
