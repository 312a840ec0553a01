"""Flat ``key = value`` experiment configuration files.

Lines starting with ``#`` are comments, lists are comma separated and
``levels`` also accepts an inclusive range ``3..9``. Keys mirror the
fields of :class:`ExperimentSpec` plus the method parameters.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable
from importlib import resources
from pathlib import Path
from typing import Any

from ..fracop import parse_method
from ..logging import get_logger
from .errors import ConfigFileError
from .spec import ExperimentSpec, validate_experiment_spec

log = get_logger(__name__)

BUNDLED_PACKAGE = "fracbox"
BUNDLED_DIR = "configs"
CONFIG_SUFFIX = ".cfg"


def _text(value: str) -> str:
    return value.strip()


def _int(value: str) -> int:
    return int(value)


def _float_list(value: str) -> list[float]:
    return [float(item) for item in _split(value)]


def _text_list(value: str) -> list[str]:
    return _split(value)


def _levels(value: str) -> list[int]:
    if ".." in value:
        first, last = value.split("..", 1)
        return list(range(int(first), int(last) + 1))
    return [int(item) for item in _split(value)]


def _split(value: str) -> list[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


KEYS: dict[str, Callable[[str], Any]] = {
    "name": _text,
    "experiment": _text,
    "betas": _float_list,
    "levels": _levels,
    "inner_products": _text_list,
    "load": _text,
    "bilinear_form": _text,
    "output_path": _text,
    "method": _text,
    "sinc_k": float,
    "sinc_n": _int,
    "contour_n_line": _int,
    "contour_n_circle": _int,
    "overkill_level": _int,
    "reference_terms": _int,
    "max_workers": _int,
    "guard_dense_limit": _int,
}

METHOD_KEYS = {"method", "sinc_k", "sinc_n", "contour_n_line", "contour_n_circle"}


def bundled_configs() -> list[str]:
    root = resources.files(BUNDLED_PACKAGE).joinpath(BUNDLED_DIR)
    return sorted(entry.name.removesuffix(CONFIG_SUFFIX) for entry in root.iterdir() if entry.name.endswith(CONFIG_SUFFIX))


def resolve_config(name_or_path: str | Path) -> tuple[str, str]:
    """Source label and text of a config file or a bundled config name."""
    path = Path(name_or_path)
    if path.is_file():
        try:
            return str(path), path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigFileError(f"cannot read config: {exc}", path=str(path)) from exc

    stem = str(name_or_path).removesuffix(CONFIG_SUFFIX)
    bundled = resources.files(BUNDLED_PACKAGE).joinpath(BUNDLED_DIR, f"{stem}{CONFIG_SUFFIX}")
    if bundled.is_file():
        return f"<bundled {stem}>", bundled.read_text(encoding="utf-8")
    raise ConfigFileError(
        f"config '{name_or_path}' not found; bundled configs: {', '.join(bundled_configs())}",
        path=str(name_or_path),
    )


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigFileError(f"expected 'key = value', got '{line}'", path=source, line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        _check_key(key, source, lineno)
        if key in entries:
            raise ConfigFileError(f"duplicate key '{key}'", path=source, line=lineno)
        entries[key] = value
    return entries


def parse_overrides(overrides: Iterable[str]) -> dict[str, str]:
    entries: dict[str, str] = {}
    for item in overrides:
        if "=" not in item:
            raise ConfigFileError(f"override '{item}' is not of the form key=value", path="<overrides>")
        key, value = (part.strip() for part in item.split("=", 1))
        _check_key(key, "<overrides>", None)
        entries[key] = value
    return entries


def spec_from_entries(entries: dict[str, str], source: str = "<config>") -> ExperimentSpec:
    values: dict[str, Any] = {}
    for key, raw in entries.items():
        try:
            values[key] = KEYS[key](raw)
        except ValueError as exc:
            raise ConfigFileError(f"bad value for '{key}': {raw!r}", path=source) from exc

    for required in ("name", "experiment", "betas"):
        if required not in values:
            raise ConfigFileError(f"missing required key '{required}'", path=source)

    method = parse_method(
        values.get("method", "sinc"),
        k=values.get("sinc_k"),
        N=values.get("sinc_n"),
        n_line=values.get("contour_n_line"),
        n_circle=values.get("contour_n_circle"),
    )
    fields = {key: value for key, value in values.items() if key not in METHOD_KEYS}
    return validate_experiment_spec(frac_method=method, **fields)


def load_experiment_config(name_or_path: str | Path, overrides: Iterable[str] = ()) -> ExperimentSpec:
    source, text = resolve_config(name_or_path)
    entries = parse_config_text(text, source)
    changed = parse_overrides(overrides)
    if changed:
        log.info("config overrides: %s", ", ".join(f"{k}={v}" for k, v in changed.items()))
    entries.update(changed)
    return spec_from_entries(entries, source)


def _check_key(key: str, source: str, lineno: int | None) -> None:
    if key not in KEYS:
        raise ConfigFileError(f"unknown key '{key}'; known keys: {', '.join(KEYS)}", path=source, line=lineno)
