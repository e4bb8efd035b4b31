from pathlib import Path

import pytest
from pydantic import ValidationError

from transport_hessian.config import (
    Command,
    InputFormat,
    RunConfig,
    TransportSettings,
    load_config_file,
)
from transport_hessian.entropy import EntropyKind
from transport_hessian.errors import ConfigError, InvalidGamma


@pytest.fixture(autouse=True)
def clear_env(monkeypatch):
    monkeypatch.delenv("TIHD_LOG_LEVEL", raising=False)
    yield


def test_settings_defaults():
    settings = TransportSettings.from_env()

    assert settings.log_level == "INFO"
    assert settings.quantiles == 2048
    assert settings.grid == 1024
    assert settings.steps == 11
    assert settings.taylor_eps == (0.1, 0.05, 0.025)


def test_settings_from_env_overrides(monkeypatch):
    monkeypatch.setenv("TIHD_LOG_LEVEL", " debug ")
    assert TransportSettings.from_env().log_level == "DEBUG"


def test_settings_unknown_level_falls_back(monkeypatch):
    monkeypatch.setenv("TIHD_LOG_LEVEL", "chatty")
    assert TransportSettings.from_env().log_level == "INFO"


def test_run_config_defaults():
    config = RunConfig(command="dist", inputs=[{"path": "a.csv"}, {"path": "b.csv"}])

    assert config.command is Command.dist
    assert config.quantiles == 2048
    assert config.grid == 1024
    assert config.steps == 11
    assert config.workers == 4
    assert config.output is None
    assert config.inputs[0].path == Path("a.csv")
    assert config.inputs[0].format is InputFormat.grid
    assert config.entropy_model().kind is EntropyKind.boltzmann


@pytest.mark.parametrize(
    "command, count",
    [("dist", 1), ("matrix", 1), ("geodesic", 1), ("hessian-check", 0)],
)
def test_run_config_requires_inputs(command, count):
    inputs = [{"path": f"{i}.csv"} for i in range(count)]
    with pytest.raises(ValidationError, match="needs at least"):
        RunConfig(command=command, inputs=inputs)


@pytest.mark.parametrize("command, count", [("dist", 3), ("geodesic", 3), ("hessian-check", 2)])
def test_run_config_rejects_extra_inputs(command, count):
    inputs = [{"path": f"{i}.csv"} for i in range(count)]
    with pytest.raises(ValidationError, match="takes at most"):
        RunConfig(command=command, inputs=inputs)


def test_entropy_table_needs_no_inputs():
    config = RunConfig(command="entropy-table", entropy="gamma:0.5")
    assert config.entropy_model().gamma == 0.5


@pytest.mark.parametrize("field, value", [("quantiles", 8), ("grid", 15), ("steps", 1), ("workers", 0)])
def test_run_config_lower_bounds(field, value):
    with pytest.raises(ValidationError):
        RunConfig(command="entropy-table", **{field: value})


def test_run_config_rejects_bad_eps_and_unknown_keys():
    with pytest.raises(ValidationError, match="positive"):
        RunConfig(command="entropy-table", eps=(0.1, 0.0))
    with pytest.raises(ValidationError):
        RunConfig(command="entropy-table", colour="blue")


def test_run_config_entropy_errors():
    with pytest.raises(ValidationError):
        RunConfig(command="entropy-table", entropy="tsallis")
    with pytest.raises(InvalidGamma):
        RunConfig(command="entropy-table", entropy="gamma", gamma=2.0)


def test_load_config_file(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text(
        "entropy: reciprocal\n"
        "quantiles: 4096\n"
        "inputs:\n"
        "  - a.csv\n"
        "  - path: b.csv\n"
        "    format: samples\n",
        encoding="utf-8",
    )

    data = load_config_file(path)
    config = RunConfig(command="dist", **data)

    assert config.quantiles == 4096
    assert [spec.path.name for spec in config.inputs] == ["a.csv", "b.csv"]
    assert config.inputs[1].format is InputFormat.samples


def test_load_config_file_errors(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config_file(tmp_path / "missing.yaml")

    bad = tmp_path / "bad.yaml"
    bad.write_text("entropy: [unclosed\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="not valid YAML"):
        load_config_file(bad)

    scalar = tmp_path / "scalar.yaml"
    scalar.write_text("just a string\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="mapping"):
        load_config_file(scalar)

    empty = tmp_path / "empty.yaml"
    empty.write_text("", encoding="utf-8")
    assert load_config_file(empty) == {}
