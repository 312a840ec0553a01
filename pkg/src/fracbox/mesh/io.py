"""Plain-text mesh import and export.

Format: a header ``dim n_vertices n_elements``, one coordinate line per
vertex, one 0-based index line per element, then a single line listing the
boundary vertices (possibly empty).
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ..logging import get_logger
from .constants import SUPPORTED_DIMS
from .errors import MeshFormatError
from .mesh import BoundaryCondition, Mesh, build_structured_square, build_uniform_interval
from .validators import MeshSpec, validate_mesh

log = get_logger(__name__)


def read_mesh(path: Path, bc: BoundaryCondition | str) -> Mesh:
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise MeshFormatError(f"Cannot read mesh file {path}: {exc}") from exc

    if not lines:
        raise MeshFormatError("Mesh file is empty", line=1)
    header = _parse_ints(lines[0], 1)
    if len(header) != 3:
        raise MeshFormatError("Header must be 'dim n_vertices n_elements'", line=1)
    dim, n_vertices, n_elements = header
    if dim not in SUPPORTED_DIMS:
        raise MeshFormatError(f"Unsupported dimension {dim}", line=1)

    expected = 1 + n_vertices + n_elements
    if len(lines) < expected:
        raise MeshFormatError(f"Expected at least {expected} lines, found {len(lines)}", line=len(lines))

    vertices = np.empty((n_vertices, dim))
    for i in range(n_vertices):
        lineno = 2 + i
        values = _parse_floats(lines[lineno - 1], lineno)
        if len(values) != dim:
            raise MeshFormatError(f"Vertex needs {dim} coordinates", line=lineno)
        vertices[i] = values

    elements = np.empty((n_elements, dim + 1), dtype=np.int64)
    for k in range(n_elements):
        lineno = 2 + n_vertices + k
        indices = _parse_ints(lines[lineno - 1], lineno)
        if len(indices) != dim + 1:
            raise MeshFormatError(f"Element needs {dim + 1} vertex indices", line=lineno)
        elements[k] = indices

    boundary_line = lines[expected] if len(lines) > expected else ""
    boundary = _parse_ints(boundary_line, expected + 1)

    mesh = Mesh(
        dim=dim,
        vertices=vertices,
        elements=elements,
        boundary_vertices=frozenset(boundary),
        bc=BoundaryCondition.parse(bc),
    )
    log.info("read %dD mesh from %s: %d vertices, %d elements", dim, path, n_vertices, n_elements)
    return validate_mesh(mesh)


def write_mesh(mesh: Mesh, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"{mesh.dim} {mesh.n_vertices} {mesh.n_elements}"]
    lines.extend(" ".join(repr(float(c)) for c in vertex) for vertex in mesh.vertices)
    lines.extend(" ".join(str(int(v)) for v in element) for element in mesh.elements)
    lines.append(" ".join(str(v) for v in sorted(mesh.boundary_vertices)))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def _parse_ints(line: str, lineno: int) -> list[int]:
    try:
        return [int(token) for token in line.split()]
    except ValueError as exc:
        raise MeshFormatError(f"Expected integers, got '{line.strip()}'", line=lineno) from exc


def _parse_floats(line: str, lineno: int) -> list[float]:
    try:
        return [float(token) for token in line.split()]
    except ValueError as exc:
        raise MeshFormatError(f"Expected decimals, got '{line.strip()}'", line=lineno) from exc


def build_mesh(spec: MeshSpec, bc: BoundaryCondition | str) -> Mesh:
    if spec.kind == "interval":
        return build_uniform_interval(spec.size, bc)
    if spec.kind == "square":
        return build_structured_square(spec.size, bc)
    return read_mesh(spec.path, bc)
