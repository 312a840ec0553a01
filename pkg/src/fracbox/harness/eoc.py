"""Experimental and theoretical orders of convergence."""

from __future__ import annotations

import math
from collections.abc import Sequence

from ..fracop import LoadKind
from .errors import HarnessValidationError
from .spec import ExperimentKind


def eoc(errors: Sequence[float], h_values: Sequence[float]) -> list[float | None]:
    """log(e_j / e_{j+1}) / log(h_j / h_{j+1}) for consecutive pairs.

    A pair containing a zero error has no defined order and yields None.
    """
    if len(errors) != len(h_values):
        raise HarnessValidationError("errors and h_values differ in length", field="errors")
    if len(errors) < 2:
        raise HarnessValidationError("at least two levels are needed", field="errors", value=len(errors))
    if any(h <= 0 for h in h_values) or any(b >= a for a, b in zip(h_values, h_values[1:])):
        raise HarnessValidationError("h_values must be positive and strictly decreasing", field="h_values")
    if any(e < 0 or math.isnan(e) for e in errors):
        raise HarnessValidationError("errors must be non-negative", field="errors")

    orders: list[float | None] = []
    for (e0, e1), (h0, h1) in zip(zip(errors, errors[1:]), zip(h_values, h_values[1:])):
        if e0 == 0 or e1 == 0:
            orders.append(None)
        else:
            orders.append(math.log(e0 / e1) / math.log(h0 / h1))
    return orders


def theoretical_rate(kind: ExperimentKind, beta: float, load: LoadKind) -> tuple[float, float]:
    """Lower and upper predicted L2 rate.

    Loads in H^s for every s < 1/2 give min(2 beta + 1/2, 2). The x^-0.499 load
    only lies in H^s for s < 0; below beta = 1 the box method is guaranteed
    min(2 beta, 1) and can reach min(2 beta, 2). From beta = 1 on it sits
    between 3/2 and 2.
    """
    if kind is ExperimentKind.SINGULAR_1D:
        if load is LoadKind.FEM:
            rate = min(2.0 * beta, 2.0)
            return rate, rate
        if beta >= 1.0:
            return 1.5, 2.0
        return min(2.0 * beta, 1.0), min(2.0 * beta, 2.0)
    rate = min(2.0 * beta + 0.5, 2.0)
    return rate, rate
