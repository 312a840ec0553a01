"""Right-hand sides of the benchmark problems."""

from __future__ import annotations

import numpy as np

from ..assembly import LoadFunction
from .constants import SINGULAR_EXPONENT
from .errors import ReferenceValidationError


def indicator_load() -> LoadFunction:
    """f = 1 on [0, 1/2] and 0 elsewhere."""
    return LoadFunction(
        func=lambda points: (points[:, 0] <= 0.5).astype(float),
        name="indicator",
        breakpoints=(0.5,),
    )


def singular_load(exponent: float = SINGULAR_EXPONENT) -> LoadFunction:
    if not exponent > -1.0:
        raise ReferenceValidationError("x^a is only integrable for a > -1", field="exponent", value=exponent)
    return LoadFunction(
        func=lambda points: np.power(points[:, 0], exponent),
        name="singular",
        singular_points=(0.0,),
    )


def checkerboard_load(point: tuple[float, float]) -> float:
    """-sign((x - 1/2)(y - 1/2)); zero on the lines x = 1/2 and y = 1/2."""
    x, y = point
    return float(-np.sign((x - 0.5) * (y - 0.5)))


def checkerboard() -> LoadFunction:
    return LoadFunction(
        func=lambda points: -np.sign((points[:, 0] - 0.5) * (points[:, 1] - 0.5)),
        name="checkerboard",
        breakpoints=(0.5,),
    )


def constant_one() -> LoadFunction:
    return LoadFunction(func=lambda points: np.ones(points.shape[0]), name="constant-one")


LOADS = {
    "indicator": indicator_load,
    "singular": singular_load,
    "checkerboard": checkerboard,
    "constant-one": constant_one,
}


LOAD_DIMS = {"checkerboard": frozenset({2})}


def select_load(name: str, dim: int | None = None) -> LoadFunction:
    key = name.strip().lower()
    if key not in LOADS:
        raise ReferenceValidationError(
            f"Unknown load '{name}'. Options: {', '.join(LOADS)}", field="f", value=name
        )
    if dim is not None and dim not in LOAD_DIMS.get(key, frozenset({1, 2})):
        raise ReferenceValidationError(f"load '{key}' is not defined in {dim}D", field="f", value=name)
    return LOADS[key]()
