"""CLI application entrypoint built with Typer."""

from __future__ import annotations

import json
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Hashable, Iterator, List, Optional

import numpy as np
import pandas as pd
import typer
from pydantic import ValidationError

from DropClause.booleanize.exceptions import BooleanizeError, DatasetFormatError
from DropClause.booleanize.models import BinarizationConfig, Vocabulary
from DropClause.booleanize.text import text_to_bow, tokenize
from DropClause.booleanize.thresholding import binarize_images
from DropClause.conv_tm.patches import PatchGeometry
from DropClause.drop_clause.telemetry import epoch_timing
from DropClause.eval_harness.corruption import corrupt_dataset, load_corruption_set
from DropClause.eval_harness.exceptions import HarnessError
from DropClause.eval_harness.metrics import evaluate
from DropClause.eval_harness.models import CorruptionKind, CorruptionSpec
from DropClause.eval_harness.perturbation import load_synonym_map, perturb_text
from DropClause.eval_harness.reporting import RobustnessReport, robustness_trials
from DropClause.interpret.clauses import export_clauses, patch_clauses
from DropClause.interpret.exceptions import InterpretError
from DropClause.interpret.heatmap import heatmap, render_heatmap
from DropClause.interpret.wordmap import annotate, word_frequency_map
from DropClause.tm_core.clauses import classify
from DropClause.tm_core.exceptions import TsetlinMachineError
from DropClause.tm_core.models import BooleanDataset, MulticlassModel
from DropClause.tm_core.trainer import FitResult, accuracy, fit

from .config import ConfigError, RunConfig
from .datasets import DatasetKind, LoadedData, class_table, load_like_model, load_training_data, require_file
from .logging import epoch_progress
from .operations import CommandRuntime, build_runtime
from .persistence import ModelFormatError, load_model, save_model

CLI_VERSION = "0.1.0"
DEFAULT_SWEEP = (0.0, 0.1, 0.25, 0.5, 0.75)

app = typer.Typer(help="Tsetlin Machine training with per-epoch clause dropping")


# ---------------------------------------------------------------------------
# Shared options
# ---------------------------------------------------------------------------

KIND_OPTION = typer.Option(DatasetKind.BITS, "--kind", help="Dataset kind: bits, idx, or text.")
LABELS_OPTION = typer.Option(None, "--labels", help="IDX label file (idx datasets).")
TEST_OPTION = typer.Option(None, "--test", help="Held-out dataset evaluated after every epoch.")
TEST_LABELS_OPTION = typer.Option(None, "--test-labels", help="IDX label file for --test.")
CLAUSES_OPTION = typer.Option(None, "--clauses", help="Clauses per class (even).")
T_OPTION = typer.Option(None, "--T", help="Voting margin T.")
S_OPTION = typer.Option(None, "--s", help="Specificity s (> 1).")
STATES_OPTION = typer.Option(None, "--states", help="States per automaton action N.")
BOOST_OPTION = typer.Option(None, "--boost-tp/--no-boost-tp", help="Boost true positive feedback.")
PATCH_OPTION = typer.Option(None, "--patch", help="Convolution window d_w; omit for a flat model.")
STEP_OPTION = typer.Option(None, "--step", help="Convolution step q.")
EPOCHS_OPTION = typer.Option(None, "--epochs", help="Training epochs.")
SEED_OPTION = typer.Option(None, "--seed", help="Random seed.")
WEIGHTED_OPTION = typer.Option(None, "--weighted/--unweighted", help="Learn integer clause weights.")
BINARY_OPTION = typer.Option(None, "--binary/--multiclass", help="Single clause bank for two labels.")
VOCAB_OPTION = typer.Option(None, "--vocab-size", help="Vocabulary size V (text datasets).")
STEM_OPTION = typer.Option(None, "--stem/--no-stem", help="Porter-stem tokens (text datasets).")
CACHE_OPTION = typer.Option(None, "--cache", help="Binarized dataset cache (IDX datasets).")


@contextmanager
def _cli_errors() -> Iterator[None]:
    """Map failures onto exit codes: 2 for unreadable inputs, 1 for invalid settings."""

    try:
        yield
    except typer.Exit:
        raise
    except (FileNotFoundError, IsADirectoryError, DatasetFormatError, ModelFormatError) as exc:
        typer.echo(f"[error] {exc}")
        raise typer.Exit(code=2)
    except (
        ValidationError,
        ConfigError,
        ValueError,
        TsetlinMachineError,
        BooleanizeError,
        HarnessError,
        InterpretError,
    ) as exc:
        typer.echo(f"[error] {exc}")
        raise typer.Exit(code=1)


def _model_for(config: RunConfig, data: LoadedData) -> MulticlassModel:
    labels = class_table(data.dataset.labels)
    hyperparams = config.hyperparams()
    if config.patch is None:
        return MulticlassModel.initialise(
            labels,
            int(np.prod(data.dataset.sample_shape)),
            hyperparams,
            binary=config.binary,
            preprocessing=data.preprocessing,
        )
    if len(data.dataset.sample_shape) < 2:
        raise ValueError("--patch needs image-shaped samples (use --kind idx)")
    geometry = PatchGeometry.for_image(
        data.dataset.sample_shape, config.patch, config.step, config.coordinates
    )
    return MulticlassModel.initialise(
        labels,
        geometry.patch_width,
        hyperparams,
        binary=config.binary,
        geometry=geometry,
        preprocessing=data.preprocessing,
    )


def _train(
    runtime: CommandRuntime,
    config: RunConfig,
    data: LoadedData,
    validation: Optional[BooleanDataset],
    description: str = "training",
) -> FitResult:
    model = _model_for(config, data)
    with epoch_progress(config.epochs, description, runtime.interactive) as advance:
        return fit(model, data.dataset, validation=validation, on_epoch=lambda _: advance())


def _find_label(model: MulticlassModel, name: Optional[str]) -> Optional[Hashable]:
    if name is None:
        return None
    for label in model.labels:
        if str(label) == name:
            return label
    raise ValueError(f"class {name!r} is not one of {[str(label) for label in model.labels]}")


# ---------------------------------------------------------------------------
# Typer callback
# ---------------------------------------------------------------------------


@app.callback()
def main_callback(
    ctx: typer.Context,
    config: Optional[Path] = typer.Option(None, "--config", help="Config file (key=value, TOML, or JSON)."),
    output_dir: Optional[Path] = typer.Option(None, "--output-dir", help="Directory for run artifacts."),
    log_format: Optional[str] = typer.Option(None, "--log-format", help="Log format (text or json)."),
    threads: Optional[int] = typer.Option(None, "--threads", help="Evaluation worker threads."),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Enable debug logging."),
) -> None:
    """Collect global options; each subcommand resolves the full configuration."""

    ctx.obj = {
        "config_path": config,
        "overrides": {
            "output_dir": output_dir,
            "log_format": log_format,
            "threads": threads,
            "verbose": True if verbose else None,
        },
    }


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


@app.command()
def train(
    ctx: typer.Context,
    dataset: Path = typer.Argument(..., help="Training dataset."),
    kind: DatasetKind = KIND_OPTION,
    labels: Optional[Path] = LABELS_OPTION,
    test: Optional[Path] = TEST_OPTION,
    test_labels: Optional[Path] = TEST_LABELS_OPTION,
    clauses: Optional[int] = CLAUSES_OPTION,
    T: Optional[int] = T_OPTION,
    s: Optional[float] = S_OPTION,
    drop_clause: Optional[float] = typer.Option(None, "--drop-clause", help="Drop probability p."),
    states: Optional[int] = STATES_OPTION,
    boost_tp: Optional[bool] = BOOST_OPTION,
    patch: Optional[int] = PATCH_OPTION,
    step: Optional[int] = STEP_OPTION,
    epochs: Optional[int] = EPOCHS_OPTION,
    seed: Optional[int] = SEED_OPTION,
    weighted: Optional[bool] = WEIGHTED_OPTION,
    binary: Optional[bool] = BINARY_OPTION,
    vocab_size: Optional[int] = VOCAB_OPTION,
    stem: Optional[bool] = STEM_OPTION,
    cache: Optional[Path] = CACHE_OPTION,
) -> None:
    """Train a model; writes model.tmdc, metrics.csv, timing.csv and config.json."""

    with _cli_errors():
        runtime = build_runtime(
            ctx,
            {
                "clauses": clauses,
                "T": T,
                "s": s,
                "drop_clause": drop_clause,
                "states": states,
                "boost_tp": boost_tp,
                "patch": patch,
                "step": step,
                "epochs": epochs,
                "seed": seed,
                "weighted": weighted,
                "binary": binary,
                "vocab_size": vocab_size,
                "stem": stem,
            },
        )
        config = runtime.config
        data = load_training_data(kind, dataset, labels, config, cache=cache)
        held_out = load_like_model(data.preprocessing, test, test_labels) if test else None
        result = _train(runtime, config, data, held_out.dataset if held_out else None)
        model = result.model

        model_path = save_model(model, runtime.artifact("model.tmdc"))
        train_accuracy = accuracy(model, data.dataset)
        metrics = pd.DataFrame(
            [
                {
                    "epoch": item.epoch,
                    "seconds": item.seconds,
                    "active_fraction": item.active_fraction,
                    "eval_accuracy": item.eval_accuracy,
                }
                for item in result.history
            ],
            columns=["epoch", "seconds", "active_fraction", "eval_accuracy"],
        )
        metrics.to_csv(runtime.artifact("metrics.csv"), index=False)
        epoch_timing(result.history).write_csv(runtime.artifact("timing.csv"))
        runtime.logger.info(
            "cli.train.complete",
            extra={"model": str(model_path), "train_accuracy": train_accuracy},
        )
        runtime.echo_artifact("model", model_path)
        typer.echo(f"train accuracy: {train_accuracy:.4f}")


@app.command("eval")
def eval_command(
    ctx: typer.Context,
    model_path: Path = typer.Argument(..., help="Model file (.tmdc)."),
    dataset: Path = typer.Argument(..., help="Dataset to score."),
    labels: Optional[Path] = LABELS_OPTION,
    cache: Optional[Path] = CACHE_OPTION,
) -> None:
    """Score a model: accuracy, per-class accuracy, confusion matrix, inference time."""

    with _cli_errors():
        runtime = build_runtime(ctx, {})
        model = load_model(require_file(model_path, "model"))
        data = load_like_model(model.preprocessing, dataset, labels, cache=cache)
        result = evaluate(model, data.dataset, threads=runtime.config.threads)
        report = runtime.write_json("eval.json", result.to_dict())
        runtime.echo_artifact("evaluation", report)
        typer.echo(f"accuracy: {result.accuracy:.4f}")


@app.command()
def interpret(
    ctx: typer.Context,
    model_path: Path = typer.Argument(..., help="Model file (.tmdc)."),
    class_name: Optional[str] = typer.Option(None, "--class", help="Class to report; default all."),
    k: int = typer.Option(10, "-k", "--top-k", help="Top weighted clauses per class."),
    sample: Optional[Path] = typer.Option(None, "--sample", help="Dataset holding a sample to explain."),
    labels: Optional[Path] = LABELS_OPTION,
    index: int = typer.Option(0, "--index", help="Sample position within --sample."),
    text: Optional[str] = typer.Option(None, "--text", help="Raw text to explain (text models)."),
    top_m: int = typer.Option(100, "--top-m", help="Literals kept in the frequency map."),
    patch_row: Optional[int] = typer.Option(None, "--patch-row", help="Patch grid row to list."),
    patch_col: Optional[int] = typer.Option(None, "--patch-col", help="Patch grid column to list."),
) -> None:
    """Clause listings, plus a frequency map (text) or heatmap (images) for one sample."""

    with _cli_errors():
        runtime = build_runtime(ctx, {})
        model = load_model(require_file(model_path, "model"))
        vocabulary = (
            Vocabulary.from_dict(model.preprocessing["vocabulary"])
            if model.preprocessing.get("kind") == DatasetKind.TEXT.value
            else None
        )
        chosen = _find_label(model, class_name)
        targets = [chosen] if chosen is not None else list(model.labels)
        reports = [export_clauses(model, label, k, vocabulary=vocabulary) for label in targets]
        runtime.write_json("clauses.json", {"reports": [report.to_dict() for report in reports]})
        listing = runtime.artifact("clauses.txt")
        listing.write_text(
            "\n".join(
                f"class {report.class_label}:\n" + "\n".join(f"  {line}" for line in report.lines())
                for report in reports
            )
            + "\n",
            encoding="utf-8",
        )
        runtime.echo_artifact("clauses", listing)

        tokens: Optional[List[str]] = None
        features: Optional[np.ndarray] = None
        if text is not None:
            if vocabulary is None:
                raise ValueError("--text needs a model trained on a text dataset")
            tokens = tokenize(text, stem=vocabulary.stem)
            features = text_to_bow(tokens, vocabulary).bits
        elif sample is not None:
            data = load_like_model(model.preprocessing, sample, labels)
            if not 0 <= index < len(data.dataset):
                raise ValueError(f"--index {index} outside a dataset of {len(data.dataset)} samples")
            features = data.dataset.features[index]
            tokens = list(data.tokens[index]) if data.tokens else None

        if features is None:
            return
        if model.geometry is None:
            frequency = word_frequency_map(model, features.reshape(-1), top_m, vocabulary=vocabulary)
            runtime.write_json("wordmap.json", frequency.to_dict())
            ranked = runtime.artifact("wordmap.txt")
            body = frequency.render_text()
            if tokens is not None:
                body += "\n\n" + annotate(tokens, frequency)
            ranked.write_text(body + "\n", encoding="utf-8")
            runtime.echo_artifact("frequency map", ranked)
            return
        label = chosen if chosen is not None else classify(model, features)
        result = heatmap(model, features, label, k)
        runtime.write_json("heatmap.json", result.to_dict())
        image = render_heatmap(result, runtime.artifact("heatmap.png"), image=features)
        runtime.echo_artifact("heatmap", image)
        if patch_row is not None and patch_col is not None:
            listing_report = patch_clauses(model, features, label, patch_row, patch_col, k)
            runtime.write_json("patch_clauses.json", listing_report.to_dict())


def _specs(
    kinds: List[CorruptionKind],
    rate: float,
    shift: tuple[int, int],
    block: int,
    apply_probability: float,
) -> List[CorruptionSpec]:
    return [
        CorruptionSpec(kind=kind, rate=rate, shift=shift, block=block, apply_probability=apply_probability)
        for kind in kinds
    ]


@app.command()
def robust(
    ctx: typer.Context,
    model_path: Path = typer.Argument(..., help="Model file (.tmdc)."),
    dataset: Path = typer.Argument(..., help="Clean test dataset."),
    labels: Optional[Path] = LABELS_OPTION,
    corruption: List[CorruptionKind] = typer.Option([], "--corruption", help="Corruption kind; repeatable."),
    rate: float = typer.Option(0.02, "--rate", help="Impulse noise flip rate."),
    shift_rows: int = typer.Option(2, "--shift-rows", help="Translate rows."),
    shift_cols: int = typer.Option(2, "--shift-cols", help="Translate columns."),
    block: int = typer.Option(8, "--block", help="Occlusion block size."),
    apply_probability: float = typer.Option(0.5, "--apply-probability", help="Per-sample corruption probability."),
    draws: int = typer.Option(5, "--draws", help="Corruption draws averaged."),
    synonyms: Optional[Path] = typer.Option(None, "--synonyms", help="word<TAB>synonym map (text models)."),
    mnist_c: Optional[Path] = typer.Option(None, "--mnist-c", help="MNIST-C root directory."),
    mnist_c_corruption: Optional[str] = typer.Option(None, "--mnist-c-corruption", help="MNIST-C corruption folder."),
    cache: Optional[Path] = CACHE_OPTION,
) -> None:
    """Clean vs corrupted accuracy; writes robustness.csv."""

    with _cli_errors():
        runtime = build_runtime(ctx, {})
        config = runtime.config
        model = load_model(require_file(model_path, "model"))
        clean = load_like_model(model.preprocessing, dataset, labels, cache=cache)
        rng = np.random.default_rng(config.seed)

        if mnist_c is not None:
            if not mnist_c_corruption:
                raise ValueError("--mnist-c needs --mnist-c-corruption")
            raw = load_corruption_set(mnist_c, mnist_c_corruption)
            binarization = BinarizationConfig.from_dict(model.preprocessing.get("binarization") or {})
            fixed = BooleanDataset(features=binarize_images(raw.images, binarization), labels=raw.labels)
            row = robustness_trials(
                model, clean.dataset, lambda _: fixed, rng, draws=1, name=mnist_c_corruption,
                threads=config.threads,
            )
        elif synonyms is not None:
            mapping = load_synonym_map(require_file(synonyms, "synonym map"))
            vocabulary = clean.vocabulary
            if vocabulary is None or not clean.tokens:
                raise ValueError("--synonyms needs a model trained on a text dataset")

            def perturbed(generator: np.random.Generator) -> BooleanDataset:
                rows = [
                    text_to_bow(perturb_text(tokens, mapping, generator), vocabulary).bits
                    for tokens in clean.tokens
                ]
                return BooleanDataset(features=np.stack(rows), labels=clean.dataset.labels)

            row = robustness_trials(
                model, clean.dataset, perturbed, rng, draws=draws, name="synonyms", threads=config.threads
            )
        else:
            specs = _specs(corruption, rate, (shift_rows, shift_cols), block, apply_probability)
            row = robustness_trials(
                model,
                clean.dataset,
                lambda generator: corrupt_dataset(clean.dataset, specs, generator),
                rng,
                draws=draws if specs else 1,
                name="+".join(kind.value for kind in corruption) or "none",
                threads=config.threads,
            )
        report_path = RobustnessReport(rows=[row]).write_csv(runtime.artifact("robustness.csv"))
        runtime.echo_artifact("robustness", report_path)
        typer.echo(f"clean {row.clean:.4f} corrupt {row.corrupt:.4f} delta {row.delta:.4f}")


@app.command()
def sweep(
    ctx: typer.Context,
    dataset: Path = typer.Argument(..., help="Training dataset."),
    kind: DatasetKind = KIND_OPTION,
    labels: Optional[Path] = LABELS_OPTION,
    test: Optional[Path] = TEST_OPTION,
    test_labels: Optional[Path] = TEST_LABELS_OPTION,
    p: List[float] = typer.Option([], "--p", help="Drop probability; repeatable."),
    clauses: Optional[int] = CLAUSES_OPTION,
    T: Optional[int] = T_OPTION,
    s: Optional[float] = S_OPTION,
    states: Optional[int] = STATES_OPTION,
    boost_tp: Optional[bool] = BOOST_OPTION,
    patch: Optional[int] = PATCH_OPTION,
    step: Optional[int] = STEP_OPTION,
    epochs: Optional[int] = EPOCHS_OPTION,
    seed: Optional[int] = SEED_OPTION,
    weighted: Optional[bool] = WEIGHTED_OPTION,
    binary: Optional[bool] = BINARY_OPTION,
    vocab_size: Optional[int] = VOCAB_OPTION,
    stem: Optional[bool] = STEM_OPTION,
) -> None:
    """Train once per drop probability; writes sweep.csv."""

    with _cli_errors():
        base: Dict[str, Any] = {
            "clauses": clauses,
            "T": T,
            "s": s,
            "states": states,
            "boost_tp": boost_tp,
            "patch": patch,
            "step": step,
            "epochs": epochs,
            "seed": seed,
            "weighted": weighted,
            "binary": binary,
            "vocab_size": vocab_size,
            "stem": stem,
        }
        runtime = build_runtime(ctx, base)
        data = load_training_data(kind, dataset, labels, runtime.config)
        held_out = load_like_model(data.preprocessing, test, test_labels) if test else None
        scored = held_out.dataset if held_out else data.dataset
        rows = []
        for probability in p or DEFAULT_SWEEP:
            config = RunConfig.model_validate({**runtime.config.model_dump(), "drop_clause": probability})
            result = _train(runtime, config, data, None, description=f"p={probability}")
            timing = epoch_timing(result.history)
            rows.append(
                {
                    "p": probability,
                    "accuracy": accuracy(result.model, scored),
                    "mean_epoch_seconds": timing.mean_seconds,
                    "mean_active_fraction": timing.mean_active_fraction,
                }
            )
            runtime.logger.info("cli.sweep.point", extra=rows[-1])
        frame = pd.DataFrame(rows, columns=["p", "accuracy", "mean_epoch_seconds", "mean_active_fraction"])
        path = runtime.artifact("sweep.csv")
        frame.to_csv(path, index=False)
        runtime.echo_artifact("sweep", path)
        typer.echo(json.dumps(rows, indent=2))


# ---------------------------------------------------------------------------
# Entrypoint
# ---------------------------------------------------------------------------


def main() -> None:
    """Entrypoint for the CLI."""

    app()
