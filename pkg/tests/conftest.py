from __future__ import annotations

import pytest

from fracbox.mesh import build_dual_cells, build_structured_square, build_uniform_interval


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("FRACBOX_CACHE_DIR", str(tmp_path / "cache"))
    return tmp_path / "cache"


@pytest.fixture
def interval16():
    mesh = build_uniform_interval(16, "dirichlet")
    return mesh, build_dual_cells(mesh)


@pytest.fixture
def square4():
    mesh = build_structured_square(4, "neumann")
    return mesh, build_dual_cells(mesh)
