"""Per-epoch wall-time and active-clause reporting."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, List, Sequence

import numpy as np
import pandas as pd

if TYPE_CHECKING:  # pragma: no cover
    from DropClause.tm_core.models import EpochMetrics

logger = logging.getLogger(__name__)

TIMING_COLUMNS = ("epoch", "active_fraction", "seconds")


@dataclass(frozen=True)
class TimingRow:
    epoch: int
    active_fraction: float
    seconds: float


@dataclass(slots=True)
class EpochTimingReport:
    """Rows of ``epoch,active_fraction,seconds`` for one fit run."""

    rows: List[TimingRow] = field(default_factory=list)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [(row.epoch, row.active_fraction, row.seconds) for row in self.rows],
            columns=list(TIMING_COLUMNS),
        )

    def write_csv(self, path: Path) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False)
        return path

    @property
    def mean_seconds(self) -> float:
        return float(np.mean([row.seconds for row in self.rows])) if self.rows else 0.0

    @property
    def median_seconds(self) -> float:
        return float(np.median([row.seconds for row in self.rows])) if self.rows else 0.0

    @property
    def mean_active_fraction(self) -> float:
        return float(np.mean([row.active_fraction for row in self.rows])) if self.rows else 0.0


def epoch_timing(history: Sequence["EpochMetrics"]) -> EpochTimingReport:
    """Build the timing report from fit telemetry."""

    report = EpochTimingReport(
        rows=[
            TimingRow(epoch=item.epoch, active_fraction=item.active_fraction, seconds=item.seconds)
            for item in history
        ]
    )
    logger.info(
        "drop_clause.timing",
        extra={
            "epochs": len(report.rows),
            "mean_seconds": report.mean_seconds,
            "mean_active_fraction": report.mean_active_fraction,
        },
    )
    return report
