"""Tests for per-epoch clause masks and timing reports."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pandas as pd
import pytest
from conftest import slow
from hypothesis import given, settings
from hypothesis import strategies as st

from DropClause.drop_clause import TIMING_COLUMNS, DropMask, epoch_timing, sample_mask
from DropClause.tm_core import BooleanDataset, EpochMetrics, Hyperparams, MulticlassModel, fit


def test_p_zero_keeps_every_clause(rng: np.random.Generator) -> None:
    mask = sample_mask(100, 0.0, rng)

    assert mask.bits.all()
    assert mask.active_fraction == 1.0


def test_p_one_drops_every_clause(rng: np.random.Generator) -> None:
    mask = sample_mask(100, 1.0, rng)

    assert not mask.bits.any()
    assert mask.active_indices.size == 0


def test_drop_rate_matches_probability(rng: np.random.Generator) -> None:
    dropped = [1.0 - sample_mask(10_000, 0.75, rng).active_fraction for _ in range(50)]

    assert all(0.72 <= value <= 0.78 for value in dropped)
    assert float(np.mean(dropped)) == pytest.approx(0.75, abs=0.005)


@pytest.mark.parametrize("p", [-0.1, 1.1])
def test_sample_mask_rejects_bad_probability(rng: np.random.Generator, p: float) -> None:
    with pytest.raises(ValueError):
        sample_mask(10, p, rng)


@settings(max_examples=30, deadline=None)
@given(clauses=st.integers(min_value=1, max_value=200), p=st.floats(min_value=0.0, max_value=1.0))
def test_mask_shape_and_immutability(clauses: int, p: float) -> None:
    mask = sample_mask(clauses, p, np.random.default_rng(0), epoch=4)

    assert len(mask) == clauses
    assert mask.epoch == 4
    with pytest.raises(ValueError):
        mask.bits[0] = not mask.bits[0]


def test_full_mask() -> None:
    mask = DropMask.full(6, epoch=2)

    assert mask.active_indices.tolist() == [0, 1, 2, 3, 4, 5]


def _fit_history(xor_repeated: BooleanDataset, p: float) -> list[EpochMetrics]:
    hp = Hyperparams(clauses=40, T=10, s=3.9, epochs=6, drop_clause=p, seed=5)
    return fit(MulticlassModel.initialise((0, 1), 2, hp), xor_repeated).history


def test_timing_report_for_p_zero(xor_repeated: BooleanDataset) -> None:
    report = epoch_timing(_fit_history(xor_repeated, 0.0))

    assert [row.active_fraction for row in report.rows] == [1.0] * 6
    assert report.mean_active_fraction == 1.0
    assert all(row.seconds >= 0.0 for row in report.rows)


def test_timing_report_for_p_half(xor_repeated: BooleanDataset) -> None:
    report = epoch_timing(_fit_history(xor_repeated, 0.5))

    assert report.mean_active_fraction == pytest.approx(0.5, abs=0.12)


def test_timing_report_csv(tmp_path: Path) -> None:
    history = [
        EpochMetrics(epoch=0, seconds=0.5, active_fraction=0.75),
        EpochMetrics(epoch=1, seconds=0.25, active_fraction=0.5),
    ]
    report = epoch_timing(history)
    path = report.write_csv(tmp_path / "out" / "timing.csv")

    frame = pd.read_csv(path)
    assert tuple(frame.columns) == TIMING_COLUMNS
    assert frame["epoch"].tolist() == [0, 1]
    assert report.mean_seconds == pytest.approx(0.375)
    assert report.median_seconds == pytest.approx(0.375)


def test_empty_history_report() -> None:
    report = epoch_timing([])

    assert report.mean_seconds == 0.0
    assert report.to_frame().empty


def _median_epoch_seconds(dataset: BooleanDataset, p: float) -> float:
    hp = Hyperparams(clauses=10_000, T=5000, s=3.9, epochs=5, drop_clause=p, seed=2)
    return epoch_timing(fit(MulticlassModel.initialise((0, 1), 500, hp), dataset).history).median_seconds


@slow
def test_epoch_time_shrinks_with_drop_probability() -> None:
    generator = np.random.default_rng(8)
    dataset = BooleanDataset(
        features=generator.integers(0, 2, size=(60, 500), dtype=np.uint8),
        labels=generator.integers(0, 2, size=60),
    )
    baseline = _median_epoch_seconds(dataset, 0.0)

    assert _median_epoch_seconds(dataset, 0.5) <= 0.65 * baseline
    assert _median_epoch_seconds(dataset, 0.75) <= 0.45 * baseline
