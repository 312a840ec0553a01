"""Fixed and adaptive quadrature on simplices.

Functions passed in here are vectorized: they take an ``(n, d)`` array of
points and return ``(n,)`` values.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from functools import cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate

from ..logging import get_logger
from ..mesh.mesh import signed_measures
from .constants import ADAPT_CHUNK, ADAPT_MAX_DEPTH, GRADED_MAX_BISECTIONS, INTERVAL_GAUSS_POINTS, QUAD_LIMIT
from .errors import IntegrationError

log = get_logger(__name__)

PointFunction = Callable[[np.ndarray], np.ndarray]
# points (m, q, d) and owner ids (m,) to values (m, q, k)
BatchIntegrand = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SimplexRule:
    """Quadrature rule in barycentric coordinates; weights sum to one."""

    barycentric: np.ndarray
    weights: np.ndarray
    degree: int

    def points(self, coords: np.ndarray) -> np.ndarray:
        return np.einsum("qv,mvd->mqd", self.barycentric, coords)


@cache
def interval_rule(n_points: int = INTERVAL_GAUSS_POINTS) -> SimplexRule:
    nodes, weights = leggauss(n_points)
    t = 0.5 * (nodes + 1.0)
    return SimplexRule(
        barycentric=np.column_stack([1.0 - t, t]),
        weights=0.5 * weights,
        degree=2 * n_points - 1,
    )


@cache
def triangle_rule() -> SimplexRule:
    """Seven-point rule exact for polynomials of degree five."""
    a1, b1 = 0.059715871789770, 0.470142064105115
    a2, b2 = 0.797426985353087, 0.101286507323456
    bary = np.array(
        [
            [1 / 3, 1 / 3, 1 / 3],
            [a1, b1, b1],
            [b1, a1, b1],
            [b1, b1, a1],
            [a2, b2, b2],
            [b2, a2, b2],
            [b2, b2, a2],
        ]
    )
    weights = np.array([0.225] + [0.132394152788506] * 3 + [0.125939180544827] * 3)
    return SimplexRule(barycentric=bary, weights=weights / weights.sum(), degree=5)


def element_rule(dim: int) -> SimplexRule:
    return interval_rule() if dim == 1 else triangle_rule()


def integrate_elements(f: PointFunction, coords: np.ndarray, rule: SimplexRule | None = None) -> np.ndarray:
    """Integral of ``f`` over each simplex with a fixed rule."""
    d = coords.shape[-1]
    rule = rule or element_rule(d)
    points = rule.points(coords)
    values = np.asarray(f(points.reshape(-1, d)), dtype=float).reshape(points.shape[0], points.shape[1])
    measures = np.abs(signed_measures(coords))
    return measures * (values @ rule.weights)


def adaptive_triangles(
    integrand: BatchIntegrand,
    triangles: np.ndarray,
    owners: np.ndarray,
    n_components: int,
    rtol: float,
    atol: float,
    max_depth: int = ADAPT_MAX_DEPTH,
) -> np.ndarray:
    """Integrate over many triangles by marked midpoint refinement.

    Each piece compares the seven-point rule on itself with the sum over its
    four midpoint children; pieces that miss the tolerance are split. Returns
    one row of ``n_components`` integrals per input triangle.
    """
    result = np.zeros((triangles.shape[0], n_components))
    pieces = triangles
    roots = np.arange(triangles.shape[0])
    depth = 0
    while pieces.shape[0]:
        refine_roots: list[np.ndarray] = []
        refine_pieces: list[np.ndarray] = []
        for start in range(0, pieces.shape[0], ADAPT_CHUNK):
            chunk = pieces[start : start + ADAPT_CHUNK]
            chunk_roots = roots[start : start + ADAPT_CHUNK]
            chunk_owners = owners[chunk_roots]
            children = _split_triangles(chunk)
            coarse = _rule_integral(integrand, chunk, chunk_owners)
            fine = _rule_integral(integrand, children, np.repeat(chunk_owners, 4)).reshape(-1, 4, n_components).sum(axis=1)

            area = np.abs(signed_measures(chunk))
            error = np.max(np.abs(fine - coarse), axis=1)
            tolerance = np.maximum(rtol * np.max(np.abs(fine), axis=1), atol * area)
            done = error <= tolerance
            np.add.at(result, chunk_roots[done], fine[done])
            if not done.all():
                refine_roots.append(np.repeat(chunk_roots[~done], 4))
                refine_pieces.append(children.reshape(-1, 4, 3, 2)[~done].reshape(-1, 3, 2))

        if not refine_pieces:
            break
        depth += 1
        roots = np.concatenate(refine_roots)
        pieces = np.concatenate(refine_pieces)
        if depth > max_depth:
            element = int(owners[roots[0]])
            raise IntegrationError(
                f"Adaptive quadrature did not converge after {max_depth} refinements", element=element
            )
        log.debug("adaptive quadrature depth %d: %d pieces", depth, pieces.shape[0])
    return result


def quad_interval(
    g: Callable[[float], float],
    a: float,
    b: float,
    rtol: float,
    atol: float,
    breakpoints: tuple[float, ...] = (),
    element: int | None = None,
) -> float:
    inner = [p for p in breakpoints if a < p < b]
    output = integrate.quad(
        g, a, b, epsrel=rtol, epsabs=atol, limit=QUAD_LIMIT, points=inner or None, full_output=1
    )
    if len(output) > 3:
        raise IntegrationError(f"quad on [{a:.6g}, {b:.6g}]: {output[3].splitlines()[0]}", element=element)
    return float(output[0])


def graded_quad(
    g: Callable[[float], float],
    a: float,
    b: float,
    singular_at: float,
    rtol: float,
    atol: float,
    element: int | None = None,
) -> float:
    """Integrate toward an endpoint singularity by dyadic bisection.

    The interval is cut into pieces ``[a + L/2^k, a + L/2^(k-1)]`` (mirrored
    when the singularity sits at ``b``) until a piece falls below ``rtol``
    of the running total; the remaining sliver goes to QUADPACK.
    """
    if singular_at not in (a, b):
        raise IntegrationError(f"singular point {singular_at} is not an endpoint of [{a}, {b}]", element=element)
    length = b - a
    sign = 1.0 if singular_at == a else -1.0
    anchor = singular_at
    total = 0.0
    for k in range(1, GRADED_MAX_BISECTIONS + 1):
        near, far = anchor + sign * length / 2**k, anchor + sign * length / 2 ** (k - 1)
        lo, hi = min(near, far), max(near, far)
        piece = quad_interval(g, lo, hi, rtol, atol * (hi - lo), element=element)
        total += piece
        if abs(piece) <= rtol * abs(total) or length / 2**k <= 1e-14 * max(abs(anchor), 1.0):
            lo, hi = min(anchor, near), max(anchor, near)
            return total + quad_interval(g, lo, hi, rtol, atol * (hi - lo), element=element)
    raise IntegrationError(
        f"graded quadrature toward {singular_at} did not settle after {GRADED_MAX_BISECTIONS} bisections",
        element=element,
    )


def integrate_segment(
    g: Callable[[float], float],
    a: float,
    b: float,
    rtol: float,
    atol: float,
    breakpoints: tuple[float, ...] = (),
    singular_points: tuple[float, ...] = (),
    element: int | None = None,
) -> float:
    """Integral over ``[a, b]`` that splits at breakpoints and grades into singularities."""
    cuts = sorted({a, b, *(p for p in (*breakpoints, *singular_points) if a < p < b)})
    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        singular = [p for p in singular_points if p in (lo, hi)]
        if not singular:
            total += quad_interval(g, lo, hi, rtol, atol * (hi - lo), element=element)
        elif len(singular) == 1:
            total += graded_quad(g, lo, hi, singular[0], rtol, atol, element=element)
        else:
            mid = 0.5 * (lo + hi)
            total += graded_quad(g, lo, mid, lo, rtol, atol, element=element)
            total += graded_quad(g, mid, hi, hi, rtol, atol, element=element)
    return total


def _rule_integral(integrand: BatchIntegrand, triangles: np.ndarray, owners: np.ndarray) -> np.ndarray:
    rule = triangle_rule()
    points = rule.points(triangles)
    values = np.asarray(integrand(points, owners), dtype=float)
    if values.ndim == 2:
        values = values[:, :, None]
    area = np.abs(signed_measures(triangles))
    return area[:, None] * np.einsum("mqk,q->mk", values, rule.weights)


def _split_triangles(triangles: np.ndarray) -> np.ndarray:
    p0, p1, p2 = triangles[:, 0], triangles[:, 1], triangles[:, 2]
    m01, m12, m20 = 0.5 * (p0 + p1), 0.5 * (p1 + p2), 0.5 * (p2 + p0)
    children = np.stack(
        [
            np.stack([p0, m01, m20], axis=1),
            np.stack([m01, p1, m12], axis=1),
            np.stack([m20, m12, p2], axis=1),
            np.stack([m01, m12, m20], axis=1),
        ],
        axis=1,
    )
    return children.reshape(-1, 3, 2)
