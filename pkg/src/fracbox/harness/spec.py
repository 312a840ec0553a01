"""Experiment specifications and refinement reports."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import StrEnum
from pathlib import Path

from ..assembly import AssemblyValidationError, BilinearFormKind, InnerProduct, InnerProductKind
from ..fracop import FracMethod, LoadKind, Sinc, validate_beta
from ..fracop.errors import FracOpValidationError
from .constants import DEFAULTS
from .errors import HarnessValidationError


class ExperimentKind(StrEnum):
    INDICATOR_1D = "indicator1d"
    SINGULAR_1D = "singular1d"
    CHECKER_2D = "checker2d"

    @classmethod
    def parse(cls, value: str | ExperimentKind) -> ExperimentKind:
        try:
            return cls(str(value).strip().lower())
        except ValueError as exc:
            raise HarnessValidationError(
                f"Unknown experiment '{value}'. Options: {', '.join(k.value for k in cls)}",
                field="experiment",
                value=value,
            ) from exc

    @property
    def dim(self) -> int:
        return 2 if self is ExperimentKind.CHECKER_2D else 1


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    experiment: ExperimentKind
    betas: tuple[float, ...]
    levels: tuple[int, ...]
    inner_products: tuple[InnerProduct, ...]
    load: LoadKind
    frac_method: FracMethod = field(default_factory=Sinc)
    output_path: Path | None = None
    bilinear_form: BilinearFormKind = BilinearFormKind.BOX_AVERAGED
    overkill_level: int = DEFAULTS["OVERKILL_LEVEL"]
    reference_terms: int | None = None
    max_workers: int = DEFAULTS["MAX_WORKERS"]
    guard_dense_limit: int = DEFAULTS["GUARD_DENSE_LIMIT"]


def validate_experiment_spec(
    name: str,
    experiment: ExperimentKind | str,
    betas: list[float] | tuple[float, ...],
    levels: list[int] | tuple[int, ...] | None = None,
    inner_products: list[InnerProduct | str] | tuple[InnerProduct | str, ...] = ("lumped",),
    load: LoadKind | str = LoadKind.BOX,
    frac_method: FracMethod | None = None,
    output_path: Path | str | None = None,
    bilinear_form: BilinearFormKind | str = BilinearFormKind.BOX_AVERAGED,
    overkill_level: int = DEFAULTS["OVERKILL_LEVEL"],
    reference_terms: int | None = None,
    max_workers: int = DEFAULTS["MAX_WORKERS"],
    guard_dense_limit: int = DEFAULTS["GUARD_DENSE_LIMIT"],
) -> ExperimentSpec:
    if not name or not name.strip():
        raise HarnessValidationError("name is required", field="name")
    kind = ExperimentKind.parse(experiment)

    if not betas:
        raise HarnessValidationError("betas must not be empty", field="betas")
    try:
        checked_betas = tuple(validate_beta(float(b)) for b in betas)
    except FracOpValidationError as exc:
        raise HarnessValidationError(exc.message, field="betas", value=list(betas)) from exc

    if levels is None:
        levels = DEFAULTS["LEVELS_2D"] if kind.dim == 2 else DEFAULTS["LEVELS_1D"]
    checked_levels = tuple(int(level) for level in levels)
    if len(checked_levels) < 2:
        raise HarnessValidationError("at least two levels are needed", field="levels", value=checked_levels)
    if any(level < 1 for level in checked_levels):
        raise HarnessValidationError("levels must be >= 1", field="levels", value=checked_levels)
    if any(b <= a for a, b in zip(checked_levels, checked_levels[1:])):
        raise HarnessValidationError("levels must be strictly increasing", field="levels", value=checked_levels)

    if not inner_products:
        raise HarnessValidationError("inner_products must not be empty", field="inner_products")
    try:
        parsed = tuple(InnerProduct.parse(ip) for ip in inner_products)
        load_kind = LoadKind.parse(load)
        form = BilinearFormKind.parse(bilinear_form)
    except (AssemblyValidationError, FracOpValidationError) as exc:
        raise HarnessValidationError(exc.message, field=exc.field, value=exc.value) from exc
    for ip in parsed:
        if ip.kind is InnerProductKind.MIXED:
            raise HarnessValidationError(
                "the mixed inner product is not selfadjoint and cannot drive a fractional solve",
                field="inner_products",
                value=ip.label,
            )
    if len({ip.label for ip in parsed}) != len(parsed):
        raise HarnessValidationError("inner_products contains duplicates", field="inner_products")

    if kind is ExperimentKind.CHECKER_2D and overkill_level <= checked_levels[-1]:
        raise HarnessValidationError(
            f"overkill_level {overkill_level} must exceed the finest level {checked_levels[-1]}",
            field="overkill_level",
            value=overkill_level,
        )
    if reference_terms is not None and reference_terms < 1:
        raise HarnessValidationError("reference_terms must be >= 1", field="reference_terms", value=reference_terms)
    if max_workers < 1:
        raise HarnessValidationError("max_workers must be >= 1", field="max_workers", value=max_workers)
    if guard_dense_limit < 0:
        raise HarnessValidationError(
            "guard_dense_limit must be >= 0", field="guard_dense_limit", value=guard_dense_limit
        )

    return ExperimentSpec(
        name=name.strip(),
        experiment=kind,
        betas=checked_betas,
        levels=checked_levels,
        inner_products=parsed,
        load=load_kind,
        frac_method=frac_method if frac_method is not None else Sinc(),
        output_path=Path(output_path) if output_path else None,
        bilinear_form=form,
        overkill_level=int(overkill_level),
        reference_terms=reference_terms,
        max_workers=int(max_workers),
        guard_dense_limit=int(guard_dense_limit),
    )


@dataclass(frozen=True)
class EocRow:
    experiment: str
    beta: float
    inner_product: str
    load: str
    level: int
    dofs: int
    h: float
    l2_error: float
    eoc: float | None
    theoretical_rate: float
    rate_upper: float
    guard_tolerance: float | None = None
    flagged: bool = False
    failure: str | None = None

    @property
    def failed(self) -> bool:
        return self.failure is not None


@dataclass(frozen=True)
class EocReport:
    spec: ExperimentSpec
    rows: tuple[EocRow, ...]
    theoretical_rates: dict[float, tuple[float, float]]

    def rows_for(self, beta: float, inner_product: str | None = None) -> list[EocRow]:
        return [
            row
            for row in self.rows
            if row.beta == beta and (inner_product is None or row.inner_product == inner_product)
        ]

    def terminal_eoc(self, beta: float, inner_product: str | None = None) -> float | None:
        rows = self.rows_for(beta, inner_product or self.spec.inner_products[0].label)
        if not rows:
            return None
        return rows[-1].eoc

    @property
    def failures(self) -> list[EocRow]:
        return [row for row in self.rows if row.failed]

    @property
    def flagged(self) -> list[EocRow]:
        return [row for row in self.rows if row.flagged]

    def within_band(self, beta: float, inner_product: str | None = None, tolerance: float = 0.15) -> bool:
        value = self.terminal_eoc(beta, inner_product)
        if value is None or not math.isfinite(value):
            return False
        lower, upper = self.theoretical_rates[beta]
        return lower - tolerance <= value <= upper + tolerance
