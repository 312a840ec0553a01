"""Plain-text cache of sine-series coefficients.

Each file starts with a ``beta truncation_N`` header followed by one
coefficient per line.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from ..logging import get_logger

log = get_logger(__name__)


class CoefficientCache:
    def __init__(self, directory: Path) -> None:
        self.directory = Path(directory)

    def path_for(self, tag: str, beta: float, truncation_N: int) -> Path:
        safe = tag.replace("/", "_").replace(" ", "")
        return self.directory / f"{safe}_beta{beta!r}_N{truncation_N}.txt"

    def get(self, tag: str, beta: float, truncation_N: int) -> np.ndarray | None:
        path = self.path_for(tag, beta, truncation_N)
        if not path.is_file():
            return None
        try:
            lines = path.read_text(encoding="utf-8").splitlines()
            header = lines[0].split()
            if len(header) != 2 or float(header[0]) != beta or int(header[1]) != truncation_N:
                log.warning("ignoring coefficient cache %s: header %r does not match", path, lines[0])
                return None
            values = np.array([float(line) for line in lines[1:] if line.strip()])
        except (OSError, ValueError, IndexError) as exc:
            log.warning("ignoring unreadable coefficient cache %s: %s", path, exc)
            return None
        if values.size != truncation_N:
            log.warning("ignoring coefficient cache %s: %d of %d values", path, values.size, truncation_N)
            return None
        log.info("coefficient cache hit: %s", path.name)
        return values

    def set(self, tag: str, beta: float, truncation_N: int, values: np.ndarray) -> Path | None:
        path = self.path_for(tag, beta, truncation_N)
        body = "\n".join(f"{value!r}" for value in map(float, values))
        try:
            ensure_cache_directory(self.directory)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(f"{beta!r} {truncation_N}\n{body}\n", encoding="utf-8")
            os.replace(tmp, path)
        except OSError as exc:
            log.warning("could not write coefficient cache %s: %s", path, exc)
            return None
        return path


def ensure_cache_directory(path: Path) -> None:
    path.mkdir(parents=True, exist_ok=True)
