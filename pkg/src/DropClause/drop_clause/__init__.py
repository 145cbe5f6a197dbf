"""Per-epoch clause dropping: mask sampling and timing instrumentation."""

from .masks import DropMask, sample_mask
from .telemetry import TIMING_COLUMNS, EpochTimingReport, TimingRow, epoch_timing

__all__ = [
    "DropMask",
    "EpochTimingReport",
    "TIMING_COLUMNS",
    "TimingRow",
    "epoch_timing",
    "sample_mask",
]
