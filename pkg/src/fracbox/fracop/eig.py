"""Generalized symmetric eigenproblems K v = lambda M v."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy import sparse
from scipy.sparse import linalg as spla

from ..config import load_config
from ..logging import get_logger
from .constants import DENSE_EXTREMAL_LIMIT, EXTREMAL_TOL, SYMMETRY_RTOL
from .errors import FactorizationError, FracOpValidationError, SolverError

log = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Ascending eigenvalues with M-orthonormal eigenvectors (columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    mass: sparse.csr_matrix | np.ndarray

    @property
    def n(self) -> int:
        return int(self.eigenvalues.size)

    def apply_function(self, values: np.ndarray, rhs: np.ndarray) -> np.ndarray:
        """V diag(values) V^T M rhs."""
        V = self.eigenvectors
        return V @ (values * (V.T @ (self.mass @ rhs)))


@dataclass(frozen=True)
class SpectralBounds:
    lambda_min: float
    lambda_max: float

    @property
    def condition(self) -> float:
        return self.lambda_max / self.lambda_min


@dataclass(frozen=True)
class LevelSpectrum:
    h: float
    lambda_min: float
    lambda_max: float

    @property
    def scaled_max(self) -> float:
        return self.lambda_max * self.h**2


def check_pencil(K: sparse.spmatrix | np.ndarray, M: sparse.spmatrix | np.ndarray) -> None:
    if K.shape != M.shape or K.shape[0] != K.shape[1]:
        raise FracOpValidationError(f"K {K.shape} and M {M.shape} must be square of equal size", field="shape")
    for name, matrix in (("K", K), ("M", M)):
        gap = abs(matrix - matrix.T)
        gap = gap.max() if sparse.issparse(gap) else np.max(gap)
        scale = abs(matrix).max()
        if gap > SYMMETRY_RTOL * scale:
            raise FracOpValidationError(
                f"{name} is not symmetric (defect {gap:.3e}); fractional powers need a selfadjoint pencil",
                field=name,
            )


def generalized_eig(
    K: sparse.spmatrix | np.ndarray,
    M: sparse.spmatrix | np.ndarray,
    dense_limit: int | None = None,
) -> SpectralDecomposition:
    check_pencil(K, M)
    limit = dense_limit if dense_limit is not None else load_config().dense_limit
    n = K.shape[0]
    if n > limit:
        raise FracOpValidationError(
            f"{n} unknowns exceed the dense eigensolver limit {limit}", field="dense_limit", value=n
        )
    dense_K = K.toarray() if sparse.issparse(K) else np.asarray(K, dtype=float)
    dense_M = M.toarray() if sparse.issparse(M) else np.asarray(M, dtype=float)
    try:
        eigenvalues, eigenvectors = scipy.linalg.eigh(dense_K, dense_M)
    except np.linalg.LinAlgError as exc:
        raise FactorizationError(f"M is not positive definite: {exc}") from exc
    log.debug("dense eigendecomposition of size %d: spectrum [%.4g, %.4g]", n, eigenvalues[0], eigenvalues[-1])
    return SpectralDecomposition(
        eigenvalues=eigenvalues,
        eigenvectors=eigenvectors,
        mass=sparse.csr_matrix(M) if sparse.issparse(M) else dense_M,
    )


def extremal_eigenvalues(
    K: sparse.spmatrix | np.ndarray,
    M: sparse.spmatrix | np.ndarray,
) -> SpectralBounds:
    """Smallest and largest eigenvalue of the pencil.

    Lanczos with shift-invert at zero for the bottom, plain Lanczos for the
    top; dense for small problems.
    """
    n = K.shape[0]
    if n <= DENSE_EXTREMAL_LIMIT or not sparse.issparse(K):
        decomposition = generalized_eig(K, M, dense_limit=max(n, 1))
        return SpectralBounds(float(decomposition.eigenvalues[0]), float(decomposition.eigenvalues[-1]))

    K = sparse.csc_matrix(K)
    M = sparse.csc_matrix(M)
    try:
        bottom = spla.eigsh(K, k=1, M=M, sigma=0.0, which="LM", tol=EXTREMAL_TOL, return_eigenvectors=False)
        top = spla.eigsh(K, k=1, M=M, which="LA", tol=EXTREMAL_TOL, return_eigenvectors=False)
    except spla.ArpackNoConvergence as exc:
        raise SolverError(f"Lanczos did not converge for the spectral bracket: {exc}") from exc
    except RuntimeError as exc:
        raise FactorizationError(f"Cannot factorize the pencil: {exc}") from exc
    bounds = SpectralBounds(float(bottom[0]), float(top[0]))
    log.debug("spectral bracket of size %d: [%.6g, %.6g]", n, bounds.lambda_min, bounds.lambda_max)
    return bounds


def largest_eigenvalue(K: sparse.spmatrix | np.ndarray, M: sparse.spmatrix | np.ndarray) -> float:
    """Top of the pencil's spectrum; Lanczos unless the problem is small."""
    n = K.shape[0]
    if n <= DENSE_EXTREMAL_LIMIT or not sparse.issparse(K):
        return float(generalized_eig(K, M, dense_limit=max(n, 1)).eigenvalues[-1])
    try:
        top = spla.eigsh(
            sparse.csc_matrix(K),
            k=1,
            M=sparse.csc_matrix(M),
            which="LA",
            tol=EXTREMAL_TOL,
            return_eigenvectors=False,
        )
    except spla.ArpackNoConvergence as exc:
        raise SolverError(f"Lanczos did not converge for the top eigenvalue: {exc}") from exc
    return float(top[0])


def spectral_bounds(K: sparse.spmatrix, M: sparse.spmatrix, h: float) -> LevelSpectrum:
    """Extremal eigenvalues together with the h^2-scaled top of the spectrum."""
    bounds = extremal_eigenvalues(K, M)
    return LevelSpectrum(h=h, lambda_min=bounds.lambda_min, lambda_max=bounds.lambda_max)
