"""Tests for CLI application wiring."""

from __future__ import annotations

import json
from pathlib import Path
from typing import List

import numpy as np
import pandas as pd
import pytest
from conftest import XOR_CSV
from typer.testing import CliRunner

from DropClause.booleanize.cache import load_binarized
from DropClause.booleanize.loaders import write_idx
from DropClause.booleanize.synthetic import pattern_xor_images
from DropClause.cli.app import app

XOR_FLAGS = ["--clauses", "20", "--T", "10", "--s", "3.9", "--epochs", "100", "--seed", "0", "--unweighted"]

REVIEWS = """label,text
pos,"Magnificent drama, witty and graceful"
pos,A witty graceful film
pos,magnificent acting and a graceful plot
neg,dull and boring plot
neg,a boring film without wit
neg,dull acting
"""


def invoke(output_dir: Path, args: List[str]):  # type: ignore[no-untyped-def]
    runner = CliRunner()
    return runner.invoke(app, ["--output-dir", str(output_dir), *args], env={"DC_THREADS": ""})


@pytest.fixture
def xor_run(tmp_path: Path) -> Path:
    output = tmp_path / "xor"
    result = invoke(output, ["train", str(XOR_CSV), *XOR_FLAGS])
    assert result.exit_code == 0, result.output
    return output


def test_train_writes_artifacts(xor_run: Path) -> None:
    for name in ("model.tmdc", "metrics.csv", "timing.csv", "config.json", "logs/run.log"):
        assert (xor_run / name).exists(), name

    metrics = pd.read_csv(xor_run / "metrics.csv")
    timing = pd.read_csv(xor_run / "timing.csv")
    assert len(metrics) == 100
    assert list(timing.columns) == ["epoch", "active_fraction", "seconds"]
    assert json.loads((xor_run / "config.json").read_text(encoding="utf-8"))["clauses"] == 20


def test_train_reaches_full_accuracy_and_eval_agrees(xor_run: Path, tmp_path: Path) -> None:
    output = tmp_path / "eval"
    result = invoke(output, ["eval", str(xor_run / "model.tmdc"), str(XOR_CSV)])

    assert result.exit_code == 0, result.output
    report = json.loads((output / "eval.json").read_text(encoding="utf-8"))
    assert report["accuracy"] == 1.0
    assert report["labels"] == ["0", "1"]


def test_training_is_reproducible(tmp_path: Path) -> None:
    args = ["train", str(XOR_CSV), "--clauses", "10", "--epochs", "5", "--seed", "4", "--drop-clause", "0.25"]
    first = invoke(tmp_path / "a", args)
    second = invoke(tmp_path / "b", args)

    assert first.exit_code == second.exit_code == 0
    assert (tmp_path / "a" / "model.tmdc").read_bytes() == (tmp_path / "b" / "model.tmdc").read_bytes()


def test_missing_dataset_exits_with_code_two(tmp_path: Path) -> None:
    missing = tmp_path / "nowhere.csv"
    result = invoke(tmp_path / "out", ["train", str(missing)])

    assert result.exit_code == 2
    assert "[error]" in result.output
    assert str(missing) in result.output


def test_invalid_configuration_exits_with_code_one(tmp_path: Path) -> None:
    result = invoke(tmp_path / "out", ["train", str(XOR_CSV), "--clauses", "21"])

    assert result.exit_code == 1
    assert "[error]" in result.output


def test_unreadable_model_exits_with_code_two(tmp_path: Path) -> None:
    bogus = tmp_path / "model.tmdc"
    bogus.write_bytes(b"not a model")
    result = invoke(tmp_path / "out", ["eval", str(bogus), str(XOR_CSV)])

    assert result.exit_code == 2


def test_interpret_with_zero_clauses(xor_run: Path, tmp_path: Path) -> None:
    output = tmp_path / "interpret"
    result = invoke(output, ["interpret", str(xor_run / "model.tmdc"), "-k", "0"])

    assert result.exit_code == 0, result.output
    payload = json.loads((output / "clauses.json").read_text(encoding="utf-8"))
    assert [report["entries"] for report in payload["reports"]] == [[], []]


def test_interpret_lists_clauses_and_sample_map(xor_run: Path, tmp_path: Path) -> None:
    output = tmp_path / "interpret"
    result = invoke(
        output,
        ["interpret", str(xor_run / "model.tmdc"), "--class", "1", "-k", "3", "--sample", str(XOR_CSV), "--index", "1"],
    )

    assert result.exit_code == 0, result.output
    payload = json.loads((output / "clauses.json").read_text(encoding="utf-8"))
    assert payload["reports"][0]["class"] == "1"
    assert len(payload["reports"][0]["entries"]) == 3
    assert (output / "wordmap.json").exists()


def test_interpret_rejects_unknown_class(xor_run: Path, tmp_path: Path) -> None:
    result = invoke(tmp_path / "out", ["interpret", str(xor_run / "model.tmdc"), "--class", "7"])

    assert result.exit_code == 1


def test_robust_without_corruptions_has_zero_delta(xor_run: Path, tmp_path: Path) -> None:
    output = tmp_path / "robust"
    result = invoke(output, ["robust", str(xor_run / "model.tmdc"), str(XOR_CSV)])

    assert result.exit_code == 0, result.output
    frame = pd.read_csv(output / "robustness.csv", comment="#")
    assert frame.loc[0, "delta"] == 0.0


def test_sweep_writes_one_row_per_probability(tmp_path: Path) -> None:
    output = tmp_path / "sweep"
    result = invoke(
        output,
        ["sweep", str(XOR_CSV), "--clauses", "10", "--epochs", "2", "--p", "0", "--p", "0.5"],
    )

    assert result.exit_code == 0, result.output
    frame = pd.read_csv(output / "sweep.csv")
    assert frame["p"].tolist() == [0.0, 0.5]
    assert frame.loc[0, "mean_active_fraction"] == 1.0


def test_text_pipeline(tmp_path: Path) -> None:
    reviews = tmp_path / "reviews.csv"
    reviews.write_text(REVIEWS, encoding="utf-8")
    synonyms = tmp_path / "synonyms.tsv"
    synonyms.write_text("witty\tclever\ndull\ttedious\n", encoding="utf-8")
    run = tmp_path / "text"

    trained = invoke(
        run, ["train", str(reviews), "--kind", "text", "--clauses", "10", "--epochs", "5", "--binary", "--stem"]
    )
    assert trained.exit_code == 0, trained.output
    model = run / "model.tmdc"

    explained = invoke(tmp_path / "explain", ["interpret", str(model), "--text", "a witty drama"])
    assert explained.exit_code == 0, explained.output
    assert (tmp_path / "explain" / "wordmap.txt").exists()

    robust = invoke(tmp_path / "robust", ["robust", str(model), str(reviews), "--synonyms", str(synonyms), "--draws", "2"])
    assert robust.exit_code == 0, robust.output
    frame = pd.read_csv(tmp_path / "robust" / "robustness.csv", comment="#")
    assert frame.loc[0, "draws"] == 2


def test_convolutional_pipeline(tmp_path: Path) -> None:
    dataset = pattern_xor_images(60, np.random.default_rng(0))
    images = write_idx(tmp_path / "images.idx", dataset.features * 255)
    labels = write_idx(tmp_path / "labels.idx", dataset.labels.astype(np.uint8))
    run = tmp_path / "conv"

    trained = invoke(
        run,
        ["train", str(images), "--kind", "idx", "--labels", str(labels), "--patch", "2", "--clauses", "10", "--epochs", "2"],
    )
    assert trained.exit_code == 0, trained.output

    explained = invoke(
        tmp_path / "explain",
        ["interpret", str(run / "model.tmdc"), "--sample", str(images), "--labels", str(labels), "-k", "4"],
    )
    assert explained.exit_code == 0, explained.output
    assert (tmp_path / "explain" / "heatmap.png").exists()
    heat = json.loads((tmp_path / "explain" / "heatmap.json").read_text(encoding="utf-8"))
    assert np.asarray(heat["values"]).shape == (4, 4)

    robust = invoke(
        tmp_path / "robust",
        [
            "robust", str(run / "model.tmdc"), str(images), "--labels", str(labels),
            "--corruption", "impulse_noise", "--corruption", "stripe", "--draws", "2",
        ],
    )
    assert robust.exit_code == 0, robust.output


def test_binarized_cache_is_written_then_reused(tmp_path: Path) -> None:
    generator = np.random.default_rng(3)
    dataset = pattern_xor_images(40, generator)
    images = write_idx(tmp_path / "images.idx", dataset.features * 255)
    labels = write_idx(tmp_path / "labels.idx", dataset.labels.astype(np.uint8))
    other = pattern_xor_images(20, generator)
    other_images = write_idx(tmp_path / "other-images.idx", other.features * 255)
    other_labels = write_idx(tmp_path / "other-labels.idx", other.labels.astype(np.uint8))
    cache = tmp_path / "train.tmdb"
    run = tmp_path / "run"

    trained = invoke(
        run,
        ["train", str(images), "--kind", "idx", "--labels", str(labels), "--clauses", "6", "--epochs", "1",
         "--cache", str(cache)],
    )
    assert trained.exit_code == 0, trained.output
    cached, metadata = load_binarized(cache)
    assert len(cached) == 40
    assert metadata["images"] == str(images.resolve())
    assert "cli.dataset.cache_written" in (run / "logs" / "run.log").read_text(encoding="utf-8")

    scored = invoke(tmp_path / "eval", ["eval", str(run / "model.tmdc"), str(images), "--labels", str(labels),
                                        "--cache", str(cache)])
    assert scored.exit_code == 0, scored.output
    assert "cli.dataset.cache_hit" in (tmp_path / "eval" / "logs" / "run.log").read_text(encoding="utf-8")

    rescored = invoke(
        tmp_path / "other",
        ["eval", str(run / "model.tmdc"), str(other_images), "--labels", str(other_labels), "--cache", str(cache)],
    )
    assert rescored.exit_code == 0, rescored.output
    assert "cli.dataset.cache_stale" in (tmp_path / "other" / "logs" / "run.log").read_text(encoding="utf-8")
    assert len(load_binarized(cache)[0]) == 20


def test_cache_rejects_non_image_datasets(tmp_path: Path) -> None:
    result = invoke(tmp_path / "out", ["train", str(XOR_CSV), "--cache", str(tmp_path / "xor.tmdb")])

    assert result.exit_code == 1
    assert not (tmp_path / "xor.tmdb").exists()


def test_damaged_cache_is_a_format_error(tmp_path: Path) -> None:
    dataset = pattern_xor_images(10, np.random.default_rng(5))
    images = write_idx(tmp_path / "images.idx", dataset.features * 255)
    labels = write_idx(tmp_path / "labels.idx", dataset.labels.astype(np.uint8))
    cache = tmp_path / "broken.tmdb"
    cache.write_bytes(b"TMDB")

    result = invoke(
        tmp_path / "out",
        ["train", str(images), "--kind", "idx", "--labels", str(labels), "--epochs", "1", "--cache", str(cache)],
    )

    assert result.exit_code == 2


def test_patch_flag_requires_images(tmp_path: Path) -> None:
    result = invoke(tmp_path / "out", ["train", str(XOR_CSV), "--patch", "2"])

    assert result.exit_code == 1


def test_json_logging(tmp_path: Path) -> None:
    output = tmp_path / "json"
    result = CliRunner().invoke(
        app,
        ["--output-dir", str(output), "--log-format", "json", "train", str(XOR_CSV), "--epochs", "1"],
    )

    assert result.exit_code == 0, result.output
    lines = (output / "logs" / "run.log").read_text(encoding="utf-8").splitlines()
    events = [json.loads(line)["message"] for line in lines]
    assert "tm.fit.complete" in events
