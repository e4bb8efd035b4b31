from __future__ import annotations

import enum
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .entropy import EntropyModel, parse_entropy
from .errors import ConfigError

_LOG_LEVELS = {"CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG"}


@dataclass(frozen=True)
class TransportSettings:
    """Library defaults plus the one environment-driven knob (log verbosity)."""

    log_level: str = "INFO"
    quantiles: int = 2048
    grid: int = 1024
    steps: int = 11
    max_workers: int = 4
    taylor_eps: Tuple[float, ...] = field(default=(0.1, 0.05, 0.025))

    @classmethod
    def from_env(cls) -> "TransportSettings":
        level = os.getenv("TIHD_LOG_LEVEL", "INFO").strip().upper()
        if level not in _LOG_LEVELS:
            logging.getLogger(__name__).warning("unknown TIHD_LOG_LEVEL %r, using INFO", level)
            level = "INFO"
        return cls(log_level=level)


class Command(str, enum.Enum):
    dist = "dist"
    matrix = "matrix"
    geodesic = "geodesic"
    hessian_check = "hessian-check"
    entropy_table = "entropy-table"


class InputFormat(str, enum.Enum):
    grid = "grid"
    samples = "samples"


class InputSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    path: Path
    format: InputFormat = InputFormat.grid


_MIN_INPUTS = {
    Command.dist: 2,
    Command.matrix: 2,
    Command.geodesic: 2,
    Command.hessian_check: 1,
    Command.entropy_table: 0,
}

_MAX_INPUTS = {
    Command.dist: 2,
    Command.geodesic: 2,
    Command.hessian_check: 1,
}

_SETTINGS = TransportSettings()


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    command: Command
    entropy: str = "boltzmann"
    gamma: Optional[float] = None
    inputs: Tuple[InputSpec, ...] = ()
    quantiles: int = Field(default=_SETTINGS.quantiles, ge=16)
    grid: int = Field(default=_SETTINGS.grid, ge=16)
    steps: int = Field(default=_SETTINGS.steps, ge=2)
    eps: Tuple[float, ...] = _SETTINGS.taylor_eps
    normalize: bool = False
    workers: int = Field(default=_SETTINGS.max_workers, ge=1)
    output: Optional[Path] = None
    trace: bool = False

    @field_validator("eps")
    @classmethod
    def _positive_eps(cls, value: Tuple[float, ...]) -> Tuple[float, ...]:
        if not value or any(eps <= 0.0 for eps in value):
            raise ValueError("eps values must be positive")
        return value

    @model_validator(mode="after")
    def _check_inputs(self) -> "RunConfig":
        needed = _MIN_INPUTS[self.command]
        if len(self.inputs) < needed:
            raise ValueError(f"{self.command.value} needs at least {needed} input(s), got {len(self.inputs)}")
        allowed = _MAX_INPUTS.get(self.command)
        if allowed is not None and len(self.inputs) > allowed:
            raise ValueError(f"{self.command.value} takes at most {allowed} input(s), got {len(self.inputs)}")
        parse_entropy(self.entropy, self.gamma)
        return self

    def entropy_model(self) -> EntropyModel:
        return parse_entropy(self.entropy, self.gamma)


def load_config_file(path: str | Path) -> Dict[str, Any]:
    """Read a YAML run configuration; keys are RunConfig field names."""
    config_path = Path(path)
    try:
        raw = yaml.safe_load(config_path.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {config_path}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"config file {config_path} is not valid YAML: {exc}") from exc
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {config_path} must hold a mapping")
    inputs: List[Any] = raw.get("inputs") or []
    raw["inputs"] = [{"path": item} if isinstance(item, str) else item for item in inputs]
    return raw


__all__ = [
    "TransportSettings",
    "Command",
    "InputFormat",
    "InputSpec",
    "RunConfig",
    "load_config_file",
]
