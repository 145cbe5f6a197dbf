"""Clean vs corrupted accuracy tables."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, List

import numpy as np
import pandas as pd

from DropClause.tm_core.models import BooleanDataset, MulticlassModel

from .metrics import evaluate
from .models import RobustnessRow

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ("model", "clean", "corrupt", "delta", "corrupt_spread", "draws")
REPORT_NOTE = (
    "# corruptions are applied to booleanized inputs, not raw pixels; "
    "delta = clean - corrupt"
)


@dataclass(slots=True)
class RobustnessReport:
    rows: List[RobustnessRow] = field(default_factory=list)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                (row.model, row.clean, row.corrupt, row.delta, row.corrupt_spread, row.draws)
                for row in self.rows
            ],
            columns=list(REPORT_COLUMNS),
        )

    def write_csv(self, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as handle:
            handle.write(REPORT_NOTE + "\n")
            self.to_frame().to_csv(handle, index=False)
        return path


def robustness_report(
    model: MulticlassModel,
    clean: BooleanDataset,
    corrupted: BooleanDataset,
    *,
    name: str = "model",
    threads: int = 1,
) -> RobustnessReport:
    """One row: accuracy on the clean set, on the corrupted set, and the drop between them."""

    clean_accuracy = evaluate(model, clean, threads=threads).accuracy
    corrupt_accuracy = evaluate(model, corrupted, threads=threads).accuracy
    row = RobustnessRow(
        model=name,
        clean=clean_accuracy,
        corrupt=corrupt_accuracy,
        corrupt_runs=(corrupt_accuracy,),
    )
    logger.info("robust.report", extra={"model": name, "clean": row.clean, "corrupt": row.corrupt})
    return RobustnessReport(rows=[row])


def robustness_trials(
    model: MulticlassModel,
    clean: BooleanDataset,
    make_corrupted: Callable[[np.random.Generator], BooleanDataset],
    rng: np.random.Generator,
    *,
    draws: int = 5,
    name: str = "model",
    threads: int = 1,
) -> RobustnessRow:
    """Average corrupted accuracy over `draws` independent corruption draws."""

    if draws < 1:
        raise ValueError("draws must be at least 1")
    clean_accuracy = evaluate(model, clean, threads=threads).accuracy
    runs = tuple(
        evaluate(model, make_corrupted(rng), threads=threads).accuracy for _ in range(draws)
    )
    row = RobustnessRow(
        model=name,
        clean=clean_accuracy,
        corrupt=float(np.mean(runs)),
        corrupt_spread=float(np.std(runs)),
        draws=draws,
        corrupt_runs=runs,
    )
    logger.info(
        "robust.report",
        extra={"model": name, "clean": row.clean, "corrupt": row.corrupt, "draws": draws},
    )
    return row
