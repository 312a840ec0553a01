"""Diffusion and reaction coefficients of L = -div(A grad) + kappa^2."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from weakref import WeakKeyDictionary

import numpy as np

from ..mesh import Mesh
from .constants import SYMMETRY_RTOL
from .errors import CoefficientError
from .quadrature import element_rule

MatrixField = np.ndarray | Callable[[np.ndarray], np.ndarray]
ScalarField = float | Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class CoefficientField:
    """Coefficients A and kappa.

    ``diffusion`` is a constant ``(d, d)`` matrix, a callable mapping points
    ``(n, d)`` to ``(n, d, d)``, or ``None`` for the identity. ``kappa`` is a
    constant or a callable mapping points to ``(n,)`` values.
    ``allow_zero_kappa`` admits kappa = 0 (pure diffusion, used by tests).
    """

    diffusion: MatrixField | None = None
    kappa: ScalarField = 1.0
    allow_zero_kappa: bool = False
    _element_averages: WeakKeyDictionary = field(default_factory=WeakKeyDictionary, init=False, repr=False)

    @property
    def constant_kappa(self) -> bool:
        return not callable(self.kappa)

    @property
    def constant_diffusion(self) -> bool:
        return not callable(self.diffusion)

    def diffusion_at(self, points: np.ndarray) -> np.ndarray:
        n, d = points.shape
        if self.diffusion is None:
            return np.broadcast_to(np.eye(d), (n, d, d))
        if callable(self.diffusion):
            return np.asarray(self.diffusion(points), dtype=float).reshape(n, d, d)
        return np.broadcast_to(np.asarray(self.diffusion, dtype=float).reshape(d, d), (n, d, d))

    def kappa_at(self, points: np.ndarray) -> np.ndarray:
        if callable(self.kappa):
            return np.asarray(self.kappa(points), dtype=float).reshape(points.shape[0])
        return np.full(points.shape[0], float(self.kappa))

    def kappa_squared(self, points: np.ndarray) -> np.ndarray:
        return self.kappa_at(points) ** 2

    def element_average(self, mesh: Mesh) -> np.ndarray:
        """A_K = (1/|K|) int_K A dx for every element."""
        cached = self._element_averages.get(mesh)
        if cached is not None:
            return cached
        d = mesh.dim
        if self.constant_diffusion:
            averages = np.array(self.diffusion_at(np.zeros((mesh.n_elements, d))))
        else:
            rule = element_rule(d)
            points = rule.points(mesh.element_coordinates)
            values = self.diffusion_at(points.reshape(-1, d)).reshape(mesh.n_elements, -1, d, d)
            averages = np.einsum("mqij,q->mij", values, rule.weights)
        averages.setflags(write=False)
        self._element_averages[mesh] = averages
        return averages

    def vertex_average(self, mesh: Mesh) -> np.ndarray:
        """Mean of A over the vertices of each element."""
        d = mesh.dim
        values = self.diffusion_at(mesh.vertices)
        return values[mesh.elements].mean(axis=1).reshape(mesh.n_elements, d, d)

    def validate(self, mesh: Mesh) -> CoefficientField:
        points = np.vstack([mesh.vertices, mesh.element_coordinates.mean(axis=1)])
        matrices = self.diffusion_at(points)
        asymmetry = np.max(np.abs(matrices - np.transpose(matrices, (0, 2, 1))), axis=(1, 2))
        scale = np.max(np.abs(matrices), axis=(1, 2))
        bad = np.flatnonzero(asymmetry > SYMMETRY_RTOL * np.maximum(scale, 1.0))
        if bad.size:
            point = points[bad[0]].tolist()
            raise CoefficientError(f"Diffusion coefficient is not symmetric at {point}", point=point)

        smallest = np.linalg.eigvalsh(np.array(matrices))[:, 0]
        bad = np.flatnonzero(smallest <= 0.0)
        if bad.size:
            point = points[bad[0]].tolist()
            raise CoefficientError(
                f"Diffusion coefficient is not elliptic at {point} (smallest eigenvalue {smallest[bad[0]]:.3e})",
                point=point,
            )

        kappa = self.kappa_at(points)
        bad = np.flatnonzero(kappa < 0.0 if self.allow_zero_kappa else kappa <= 0.0)
        if bad.size or not np.all(np.isfinite(kappa)):
            index = int(bad[0]) if bad.size else int(np.flatnonzero(~np.isfinite(kappa))[0])
            point = points[index].tolist()
            raise CoefficientError(f"Reaction coefficient kappa must be positive, got {kappa[index]} at {point}", point=point)
        return self


def laplacian_coefficients() -> CoefficientField:
    """A = I and kappa = 0."""
    return CoefficientField(diffusion=None, kappa=0.0, allow_zero_kappa=True)
