"""Application of (M^-1 K)^-beta by eigendecomposition, contour or sinc quadrature."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import sparse
from scipy.sparse import linalg as spla

from ..logging import get_logger
from .constants import DEFAULTS
from .eig import (
    SpectralBounds,
    SpectralDecomposition,
    check_pencil,
    extremal_eigenvalues,
    generalized_eig,
    largest_eigenvalue,
)
from .errors import FracOpValidationError, SolverError, SpectralBracketError
from .methods import Contour, EigOracle, FracMethod, Sinc, describe_method

log = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class Pencil:
    """The pair (K, M) defining L_h = M^-1 K."""

    K: sparse.csr_matrix
    M: sparse.csr_matrix
    dense_limit: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "K", sparse.csr_matrix(self.K))
        object.__setattr__(self, "M", sparse.csr_matrix(self.M))
        check_pencil(self.K, self.M)

    @property
    def n(self) -> int:
        return int(self.K.shape[0])

    @cached_property
    def decomposition(self) -> SpectralDecomposition:
        return generalized_eig(self.K, self.M, dense_limit=self.dense_limit)

    @cached_property
    def bounds(self) -> SpectralBounds:
        return extremal_eigenvalues(self.K, self.M)

    @cached_property
    def lambda_max(self) -> float:
        if "bounds" in self.__dict__:
            return self.bounds.lambda_max
        return largest_eigenvalue(self.K, self.M)


@dataclass(frozen=True)
class FracReport:
    method: str
    beta: float
    solves: int
    max_residual: float
    bracket: tuple[float, float] | None = None


@dataclass(frozen=True)
class FracResult:
    values: np.ndarray
    report: FracReport


FracTarget = Pencil | SpectralDecomposition | tuple[sparse.spmatrix, sparse.spmatrix]


def apply_frac_inverse(target: FracTarget, beta: float, rhs: np.ndarray, method: FracMethod) -> np.ndarray:
    return run_frac_inverse(target, beta, rhs, method).values


def run_frac_inverse(target: FracTarget, beta: float, rhs: np.ndarray, method: FracMethod) -> FracResult:
    if not (math.isfinite(beta) and beta > 0):
        raise FracOpValidationError("beta must be a positive number", field="beta", value=beta)
    if isinstance(target, tuple):
        target = Pencil(*target)
    rhs = np.asarray(rhs, dtype=float)
    n = target.n
    if rhs.shape != (n,):
        raise FracOpValidationError(f"rhs has shape {rhs.shape}, expected ({n},)", field="rhs", value=rhs.shape)

    if isinstance(method, EigOracle):
        decomposition = target if isinstance(target, SpectralDecomposition) else target.decomposition
        values = decomposition.apply_function(decomposition.eigenvalues ** (-beta), rhs)
        report = FracReport(method="eig", beta=beta, solves=0, max_residual=0.0)
    elif isinstance(target, SpectralDecomposition):
        raise FracOpValidationError(
            f"{method.name} needs the matrices K and M, not an eigendecomposition", field="target"
        )
    elif isinstance(method, Contour):
        values, report = _contour(target, beta, rhs, method)
    elif isinstance(method, Sinc):
        values, report = _sinc(target, beta, rhs, method)
    else:
        raise FracOpValidationError(f"Unsupported method {method!r}", field="method")

    log.debug(
        "%s applied beta=%g: %d shifted solves, max residual %.2e",
        describe_method(method),
        beta,
        report.solves,
        report.max_residual,
    )
    return FracResult(values=values, report=report)


class _ShiftedSolves:
    """Sparse direct solves of (a M + b K) x = y with residual tracking."""

    def __init__(self, pencil: Pencil) -> None:
        self.K = pencil.K.tocsc()
        self.M = pencil.M.tocsc()
        self.count = 0
        self.max_residual = 0.0

    def solve(self, a: complex, b: complex, rhs: np.ndarray) -> np.ndarray:
        matrix = (a * self.M + b * self.K).tocsc()
        try:
            solution = spla.splu(matrix).solve(rhs.astype(matrix.dtype))
        except RuntimeError as exc:
            raise SolverError(f"shifted matrix {a} M + {b} K is singular: {exc}", shift=a) from exc
        self.count += 1
        norm = np.linalg.norm(rhs)
        if norm > 0:
            residual = np.linalg.norm(matrix @ solution - rhs) / norm
            self.max_residual = max(self.max_residual, float(residual))
        return solution


def _contour(pencil: Pencil, beta: float, rhs: np.ndarray, method: Contour) -> tuple[np.ndarray, FracReport]:
    bounds = pencil.bounds
    r = method.r if method.r is not None else DEFAULTS["CONTOUR"]["r_factor"] * bounds.lambda_min
    R = method.R if method.R is not None else DEFAULTS["CONTOUR"]["R_factor"] * bounds.lambda_max
    if not (0 < r < bounds.lambda_min and R > bounds.lambda_max):
        raise SpectralBracketError(
            f"contour radii ({r:.6g}, {R:.6g}) do not bracket the spectrum "
            f"[{bounds.lambda_min:.6g}, {bounds.lambda_max:.6g}]",
            bracket=(r, R),
            spectrum=(bounds.lambda_min, bounds.lambda_max),
        )

    solver = _ShiftedSolves(pencil)
    Mx = pencil.M @ rhs
    total = np.zeros(pencil.n)

    line_weight = math.sin(math.pi * beta) / math.pi
    if line_weight != 0.0:
        nodes, weights = _gauss_legendre(math.log(r), math.log(R), method.n_line)
        for s, w in zip(nodes, weights):
            t = math.exp(s)
            total += line_weight * w * t ** (1.0 - beta) * solver.solve(t, 1.0, Mx)

    nodes, weights = _gauss_legendre(-math.pi, math.pi, method.n_circle)
    for radius, sign in ((R, 1.0), (r, -1.0)):
        scale = sign * radius ** (1.0 - beta) / (2.0 * math.pi)
        for theta, w in zip(nodes, weights):
            if theta < 0.0:
                continue
            # the node at -theta contributes the complex conjugate
            multiplicity = 1.0 if theta == 0.0 else 2.0
            shift = radius * complex(math.cos(theta), math.sin(theta))
            phase = complex(math.cos((1.0 - beta) * theta), math.sin((1.0 - beta) * theta))
            term = phase * solver.solve(shift, -1.0, Mx.astype(complex))
            total += multiplicity * scale * w * term.real

    report = FracReport(
        method="contour",
        beta=beta,
        solves=solver.count,
        max_residual=solver.max_residual,
        bracket=(r, R),
    )
    return total, report


def _sinc(pencil: Pencil, beta: float, rhs: np.ndarray, method: Sinc) -> tuple[np.ndarray, FracReport]:
    solver = _ShiftedSolves(pencil)
    whole = math.floor(beta)
    fraction = beta - whole
    x = rhs
    for _ in range(whole):
        x = solver.solve(0.0, 1.0, pencil.M @ x)
    if fraction == 0.0:
        return x, FracReport(method="sinc", beta=beta, solves=solver.count, max_residual=solver.max_residual)

    Mx = pencil.M @ x
    if fraction < 0.5:
        reference = x
        lambda_max = pencil.lambda_max if method.N is None else 1.0
    else:
        reference = solver.solve(0.0, 1.0, Mx)
        lambda_max = 1.0
    lower, upper = method.node_range(fraction, lambda_max)
    y = 2.0 * method.k * np.arange(lower, upper + 1, dtype=float)
    a, b, scale, weight = _sinc_coefficients(y, fraction)
    total = np.zeros(pencil.n)
    for a_l, b_l, scale_l, weight_l in zip(a, b, scale, weight):
        total += scale_l * solver.solve(float(a_l), float(b_l), Mx) - weight_l * reference
    values = reference + 2.0 * method.k * math.sin(math.pi * fraction) / math.pi * total
    return values, FracReport(method="sinc", beta=beta, solves=solver.count, max_residual=solver.max_residual)


def _sinc_coefficients(y: np.ndarray, fraction: float) -> tuple[np.ndarray, ...]:
    """Terms scale (a M + b K)^-1 M x - weight reference at the nodes y.

    With c = e^y, the plain term c^f (M + c K)^-1 M x is rescaled by 1/c for
    y > 0, so every exponential stays at most one.
    """
    positive = np.maximum(y, 0.0)
    negative = np.minimum(y, 0.0)
    a = np.exp(-positive)
    b = np.exp(negative)
    scale = np.exp(fraction * negative + (fraction - 1.0) * positive)
    weight = scale / (1.0 + np.exp(-np.abs(y)))
    return a, b, scale, weight


def sinc_scalar(lam: np.ndarray, beta: float, method: Sinc) -> np.ndarray:
    """The sinc rule applied to scalars lam, approximating lam^-beta for beta in (0, 1)."""
    lam = np.asarray(lam, dtype=float)
    lambda_max = float(lam.max()) if lam.size else 1.0
    lower, upper = method.node_range(beta, lambda_max)
    y = 2.0 * method.k * np.arange(lower, upper + 1, dtype=float)[:, None]
    a, b, scale, weight = _sinc_coefficients(y, beta)
    reference = np.ones_like(lam) if beta < 0.5 else 1.0 / lam
    terms = scale / (a + b * lam[None, :]) - weight * reference[None, :]
    return reference + 2.0 * method.k * math.sin(math.pi * beta) / math.pi * terms.sum(axis=0)


def _gauss_legendre(a: float, b: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = leggauss(n)
    half = 0.5 * (b - a)
    return half * nodes + 0.5 * (a + b), half * weights
