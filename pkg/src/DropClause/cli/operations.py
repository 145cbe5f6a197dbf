"""Runtime state shared by subcommands and helpers for writing run artifacts."""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

import typer

from .config import RunConfig, load_run_config
from .logging import configure_logging

JsonDict = dict[str, Any]


@dataclass(frozen=True)
class CommandRuntime:
    """Resolved configuration and logger for one invocation."""

    config: RunConfig
    logger: logging.Logger

    @property
    def output_dir(self) -> Path:
        return self.config.output_dir

    @property
    def interactive(self) -> bool:
        return self.config.log_format == "text"

    def artifact(self, name: str) -> Path:
        path = self.output_dir / name
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    def write_json(self, name: str, payload: Mapping[str, Any]) -> Path:
        path = self.artifact(name)
        path.write_text(
            json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False, default=str) + "\n",
            encoding="utf-8",
        )
        return path

    def echo_artifact(self, label: str, path: Path) -> None:
        typer.echo(f"[ok] {label}: {path}")


def fingerprint(payload: Mapping[str, Any]) -> str:
    serialised = json.dumps(payload, sort_keys=True, default=str)
    return hashlib.sha256(serialised.encode("utf-8")).hexdigest()


def build_runtime(ctx: typer.Context, overrides: Mapping[str, Any]) -> CommandRuntime:
    """Resolve the configuration for a subcommand, configure logging, echo the config."""

    base: Mapping[str, Any] = ctx.obj or {}
    merged = {**base.get("overrides", {}), **overrides}
    config = load_run_config(base.get("config_path"), overrides=merged)
    config.output_dir.mkdir(parents=True, exist_ok=True)
    logger = configure_logging(config.output_dir / "logs" / "run.log", config.log_format, config.verbose)
    runtime = CommandRuntime(config=config, logger=logger)
    resolved = config.resolved()
    runtime.write_json("config.json", resolved)
    logger.info("cli.config", extra={"fingerprint": fingerprint(resolved)})
    return runtime
