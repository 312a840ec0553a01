"""Sine-series solutions of the one-dimensional benchmark problems on [0, 1].

With L = -u'' + kappa^2 u and homogeneous Dirichlet conditions the
eigenpairs are ((n pi)^2 + kappa^2, sqrt(2) sin(n pi x)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy import integrate

from ..assembly import IntegrationError
from ..config import load_config
from ..logging import get_logger
from .cache import CoefficientCache
from .constants import DEFAULTS, KAPPA, QUAD_LIMIT, SERIES_CHUNK, SINGULAR_EXPONENT
from .errors import ReferenceValidationError

log = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class SeriesSolution:
    """u(x) = sum_n c_n sin(n pi x), n = 1..truncation_N."""

    coefficients: np.ndarray
    truncation_N: int
    beta: float

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.ndim == 2:
            x = x[:, 0]
        frequencies = np.pi * np.arange(1, self.truncation_N + 1)
        values = np.empty(x.shape[0])
        for start in range(0, x.shape[0], SERIES_CHUNK):
            block = x[start : start + SERIES_CHUNK]
            values[start : start + SERIES_CHUNK] = np.sin(np.outer(block, frequencies)) @ self.coefficients
        return values

    def tail_envelope(self, start: int) -> np.ndarray:
        """Running maximum of |c_n| from the end, for n >= start."""
        tail = np.abs(self.coefficients[start - 1 :])
        return np.maximum.accumulate(tail[::-1])[::-1]


def _check_terms(truncation_N: int) -> None:
    if truncation_N < 1:
        raise ReferenceValidationError("truncation_N must be >= 1", field="truncation_N", value=truncation_N)


def indicator_solution(beta: float, truncation_N: int = DEFAULTS["INDICATOR_TERMS"], kappa: float = KAPPA) -> SeriesSolution:
    _check_terms(truncation_N)
    n = np.arange(1, truncation_N + 1, dtype=float)
    w = n * np.pi
    coefficients = 2.0 * (1.0 - np.cos(w / 2.0)) / (w * (w**2 + kappa**2) ** beta)
    return SeriesSolution(coefficients=coefficients, truncation_N=truncation_N, beta=beta)


def indicator_series(beta: float, truncation_N: int, eval_points: np.ndarray) -> np.ndarray:
    return indicator_solution(beta, truncation_N)(eval_points)


@lru_cache(maxsize=8)
def sine_moments(truncation_N: int, exponent: float = SINGULAR_EXPONENT, atol: float | None = None) -> np.ndarray:
    """b_n = int_0^1 x^exponent sin(n pi x) dx for n = 1..truncation_N.

    The algebraic weight handles the endpoint singularity on [0, min(1, 1/(n pi))];
    the oscillatory weight handles the rest.
    """
    _check_terms(truncation_N)
    atol = atol if atol is not None else load_config().coeff_atol
    moments = np.empty(truncation_N)
    for n in range(1, truncation_N + 1):
        w = n * math.pi
        split = min(1.0, 1.0 / w)
        head = _quad(lambda x: math.sin(w * x), 0.0, split, atol, n, weight="alg", wvar=(exponent, 0.0))
        tail = 0.0
        if split < 1.0:
            tail = _quad(lambda x: x**exponent, split, 1.0, atol, n, weight="sin", wvar=w)
        moments[n - 1] = head + tail
    moments.setflags(write=False)
    return moments


def singular_solution(
    beta: float,
    truncation_N: int = DEFAULTS["SINGULAR_TERMS"],
    exponent: float = SINGULAR_EXPONENT,
    kappa: float = KAPPA,
    cache_dir: Path | None = None,
    use_cache: bool = True,
) -> SeriesSolution:
    _check_terms(truncation_N)
    cache = CoefficientCache(cache_dir or load_config().cache_dir) if use_cache else None
    tag = f"singular_a{exponent!r}_k{kappa!r}"
    if cache is not None:
        cached = cache.get(tag, beta, truncation_N)
        if cached is not None:
            return SeriesSolution(coefficients=cached, truncation_N=truncation_N, beta=beta)

    w = np.pi * np.arange(1, truncation_N + 1)
    coefficients = 2.0 * (w**2 + kappa**2) ** (-beta) * sine_moments(truncation_N, exponent)
    if cache is not None:
        cache.set(tag, beta, truncation_N, coefficients)
    log.debug("singular series: beta=%g, %d terms", beta, truncation_N)
    return SeriesSolution(coefficients=coefficients, truncation_N=truncation_N, beta=beta)


def singular_series(beta: float, truncation_N: int, eval_points: np.ndarray) -> np.ndarray:
    return singular_solution(beta, truncation_N)(eval_points)


def _quad(f, a: float, b: float, atol: float, n: int, **weight) -> float:
    output = integrate.quad(f, a, b, epsabs=atol, epsrel=0.0, limit=QUAD_LIMIT, full_output=1, **weight)
    if len(output) > 3:
        raise IntegrationError(f"sine moment n={n} on [{a:.4g}, {b:.4g}]: {output[3].splitlines()[0]}")
    return float(output[0])
