"""Logging setup for CLI runs."""

from __future__ import annotations

import logging
import logging.config
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Callable, Iterator

from rich.console import Console
from rich.progress import BarColumn, Progress, TextColumn, TimeElapsedColumn

LOGGER_NAME = "DropClause"


def configure_logging(log_path: Path, log_format: str, verbose: bool) -> logging.Logger:
    """Console plus ``run.log`` handlers on the package logger, text or JSON formatted."""

    log_path.parent.mkdir(parents=True, exist_ok=True)
    formatter = "json" if log_format == "json" else "text"
    level = "DEBUG" if verbose else "INFO"
    logging.config.dictConfig(
        {
            "version": 1,
            "disable_existing_loggers": False,
            "formatters": {
                "text": {"format": "%(asctime)s %(levelname)s %(name)s %(message)s"},
                "json": {
                    "()": "pythonjsonlogger.json.JsonFormatter",
                    "fmt": "%(asctime)s %(levelname)s %(name)s %(message)s",
                },
            },
            "handlers": {
                "console": {
                    "class": "logging.StreamHandler",
                    "stream": sys.stderr,
                    "formatter": formatter,
                    "level": level,
                },
                "file": {
                    "class": "logging.FileHandler",
                    "filename": str(log_path),
                    "mode": "a",
                    "encoding": "utf-8",
                    "formatter": formatter,
                },
            },
            "loggers": {
                LOGGER_NAME: {
                    "handlers": ["console", "file"],
                    "level": level,
                    "propagate": False,
                }
            },
        }
    )
    logger = logging.getLogger(f"{LOGGER_NAME}.cli")
    logger.debug("cli.logging", extra={"log_path": str(log_path), "log_format": log_format})
    return logger


@contextmanager
def epoch_progress(total: int, description: str, enabled: bool = True) -> Iterator[Callable[[], None]]:
    """Yield an `advance` callback; a rich bar is shown only when enabled."""

    if not enabled or total <= 0:
        yield lambda: None
        return
    progress = Progress(
        TextColumn("{task.description}"),
        BarColumn(),
        TextColumn("{task.completed}/{task.total}"),
        TimeElapsedColumn(),
        transient=True,
        console=Console(stderr=True),
    )
    task_id = progress.add_task(description, total=total)
    with progress:
        yield lambda: progress.advance(task_id)
