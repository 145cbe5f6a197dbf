"""Run configuration: defaults, then config file, then environment, then flags."""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path
from typing import Any, Dict, Literal, Mapping, Optional

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - Python 3.10 fallback with the same API
    import tomli as tomllib

from pydantic import BaseModel, ConfigDict, Field, field_validator

from DropClause.booleanize.models import BinarizationConfig
from DropClause.tm_core.models import Hyperparams

ENV_OVERRIDES = {
    "DC_THREADS": "threads",
    "DC_LOG_FORMAT": "log_format",
    "DC_OUTPUT_DIR": "output_dir",
    "DC_SEED": "seed",
}


class ConfigError(ValueError):
    """Raised when a configuration file cannot be parsed."""


class RunConfig(BaseModel):
    """Every setting a subcommand can use; unknown keys are rejected."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    # Tsetlin Machine
    clauses: int = Field(default=20, ge=2)
    T: int = Field(default=10, ge=1)
    s: float = Field(default=3.9, gt=1.0)
    states: int = Field(default=128, ge=1)
    boost_tp: bool = False
    drop_clause: float = Field(default=0.0, ge=0.0, le=1.0)
    epochs: int = Field(default=10, ge=0)
    seed: int = 0
    weighted: bool = True
    binary: bool = False

    # Convolution
    patch: Optional[int] = Field(default=None, ge=1)
    step: int = Field(default=1, ge=1)
    coordinates: bool = True

    # Booleanization
    window: int = 11
    sigma: Optional[float] = Field(default=None, gt=0.0)
    offset: float = 2.0
    vocab_size: int = Field(default=5000, ge=1)
    min_freq: int = Field(default=1, ge=1)
    stem: bool = False

    # Run
    output_dir: Path = Path("runs/latest")
    threads: int = Field(default=1, ge=1)
    log_format: Literal["text", "json"] = "text"
    verbose: bool = False

    @field_validator("clauses")
    @classmethod
    def _even_clauses(cls, value: int) -> int:
        if value % 2:
            raise ValueError("clauses must be even (equal positive and negative halves)")
        return value

    @field_validator("window")
    @classmethod
    def _odd_window(cls, value: int) -> int:
        if value < 3 or value % 2 == 0:
            raise ValueError("window must be an odd integer ≥ 3")
        return value

    @field_validator("log_format", mode="before")
    @classmethod
    def _lower_format(cls, value: Any) -> Any:
        return value.lower() if isinstance(value, str) else value

    def hyperparams(self) -> Hyperparams:
        return Hyperparams(
            clauses=self.clauses,
            T=self.T,
            s=self.s,
            states=self.states,
            boost_true_positive=self.boost_tp,
            drop_clause=self.drop_clause,
            epochs=self.epochs,
            seed=self.seed,
            weighted=self.weighted,
        )

    def binarization(self) -> BinarizationConfig:
        return BinarizationConfig(window=self.window, sigma=self.sigma, offset=self.offset)

    def resolved(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")


def _parse_key_values(text: str, path: Path) -> Dict[str, Any]:
    data: Dict[str, Any] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{number}: expected key=value, got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        data[key.replace("-", "_")] = value
    return data


def _load_file_config(path: Path) -> Dict[str, Any]:
    suffix = path.suffix.lower()
    content = path.read_bytes()
    try:
        if suffix == ".json":
            data = json.loads(content)
        elif suffix in {".toml", ".tml"}:
            data = tomllib.loads(content.decode("utf-8"))
        else:
            return _parse_key_values(content.decode("utf-8"), path)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: configuration must be a mapping")
    return {str(key).replace("-", "_"): value for key, value in data.items()}


def _env_config(env: Mapping[str, str]) -> Dict[str, Any]:
    return {field: env[name] for name, field in ENV_OVERRIDES.items() if env.get(name)}


def load_run_config(
    config_path: Optional[Path] = None,
    env: Optional[Mapping[str, str]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> RunConfig:
    """Merge the configuration sources; later sources win, None-valued overrides are ignored."""

    env = os.environ if env is None else env
    merged: Dict[str, Any] = {}
    if config_path is not None:
        path = Path(config_path).expanduser()
        if not path.exists():
            raise FileNotFoundError(f"config file not found: {path}")
        merged.update(_load_file_config(path))
    merged.update(_env_config(env))
    merged.update({key: value for key, value in (overrides or {}).items() if value is not None})
    return RunConfig.model_validate(merged)
