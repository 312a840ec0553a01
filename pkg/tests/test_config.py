from __future__ import annotations

import logging

import pytest

from fracbox.config import DEFAULTS, ConfigError, format_error_for_user, load_config
from fracbox.logging import get_logger


def test_defaults(monkeypatch):
    for name in ("FRACBOX_DENSE_LIMIT", "FRACBOX_QUAD_RTOL", "FRACBOX_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    config = load_config()
    assert config.dense_limit == DEFAULTS["DENSE_LIMIT"]
    assert config.quad_rtol == DEFAULTS["QUAD_RTOL"]
    assert config.log_level == logging.WARNING


def test_environment_overrides(monkeypatch, tmp_path):
    monkeypatch.setenv("FRACBOX_DENSE_LIMIT", "123")
    monkeypatch.setenv("FRACBOX_COEFF_ATOL", "1e-9")
    monkeypatch.setenv("FRACBOX_CACHE_DIR", str(tmp_path))
    monkeypatch.setenv("FRACBOX_LOG_LEVEL", "debug")
    config = load_config()
    assert config.dense_limit == 123
    assert config.coeff_atol == 1e-9
    assert config.cache_dir == tmp_path
    assert config.log_level == logging.DEBUG


@pytest.mark.parametrize(
    ("name", "value"),
    [
        ("FRACBOX_DENSE_LIMIT", "many"),
        ("FRACBOX_DENSE_LIMIT", "0"),
        ("FRACBOX_QUAD_RTOL", "-1"),
        ("FRACBOX_LOG_LEVEL", "LOUD"),
    ],
)
def test_invalid_environment(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(ConfigError) as info:
        load_config()
    assert info.value.code == "CONFIG_ERROR"
    assert info.value.variable == name
    assert info.value.details["value"].upper() == value.upper()
    assert format_error_for_user(info.value).startswith(f"Configuration Error: {name}=")


def test_loggers_live_under_package_namespace():
    assert get_logger("harness.runner").name == "fracbox.harness.runner"
    assert get_logger("fracbox.mesh").name == "fracbox.mesh"
