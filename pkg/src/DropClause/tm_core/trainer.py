"""Per-sample training steps and the epoch loop."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Callable, List, Optional

import numpy as np

from DropClause.drop_clause.masks import DropMask, sample_mask

from .clauses import (
    active_clauses,
    encode_literals,
    literal_rows_of,
    patch_from_uniform,
    predict,
)
from .exceptions import EmptyDatasetError, UnknownClassError
from .feedback import feedback_probability, type_i_deltas, type_ii_deltas
from .models import BooleanDataset, ClauseBank, EpochMetrics, EvalMode, Hyperparams, MulticlassModel
from .rng import RandomStreams

logger = logging.getLogger(__name__)

_EMPTY = np.zeros(0, dtype=np.int64)
_EMPTY.setflags(write=False)


@dataclass(frozen=True)
class FeedbackEvents:
    """Which clauses (bank row indices) received which feedback in one step."""

    vote: int
    probability: float
    type_i: np.ndarray
    type_ii: np.ndarray
    weight_changed: np.ndarray


@dataclass(slots=True)
class FitResult:
    model: MulticlassModel
    history: List[EpochMetrics] = field(default_factory=list)

    @property
    def mean_epoch_seconds(self) -> float:
        return float(np.mean([item.seconds for item in self.history])) if self.history else 0.0


FeedbackHook = Callable[[FeedbackEvents], None]


def _choose_patches(matches: np.ndarray, outputs: np.ndarray, u: np.ndarray) -> np.ndarray:
    patch_count = matches.shape[1]
    return np.array(
        [
            patch_from_uniform(np.flatnonzero(row), bool(fired), float(draw), patch_count)
            for row, fired, draw in zip(matches, outputs, u)
        ],
        dtype=np.int64,
    )


def train_on_literals(
    bank: ClauseBank,
    literal_rows: np.ndarray,
    target_y: int,
    active: np.ndarray,
    rng: np.random.Generator,
    hyperparams: Hyperparams,
    *,
    record: bool = True,
) -> Optional[FeedbackEvents]:
    """Apply one feedback round to `bank` in place.

    `literal_rows` is (B, 2o): B=1 for flat samples, one row per patch otherwise.
    Draw order on `rng`: clause selection, then patch choice (B > 1), then Type I.
    With ``record=False`` nothing is collected and None is returned.
    """

    if target_y not in (0, 1):
        raise ValueError(f"target_y must be 0 or 1, got {target_y!r}")
    matrix = bank.matrix
    N = matrix.states_per_action
    states = matrix.states
    full = active.size == states.shape[0]
    include = (states if full else states[active]) > N
    if literal_rows.shape[0] == 1:
        matches = None
        outputs = ~include[:, literal_rows[0] == 0].any(axis=1)
    else:
        violations = include.astype(np.float32) @ (1 - literal_rows.astype(np.float32)).T
        matches = violations == 0
        outputs = matches.any(axis=1)
    signed = bank.signed_weights if full else bank.signed_weights[active]
    vote = int(signed @ outputs)
    probability = feedback_probability(vote, hyperparams.T, target_y)
    selected = np.flatnonzero(rng.random(active.size) < probability)
    if selected.size == 0:
        return FeedbackEvents(vote, probability, _EMPTY, _EMPTY, _EMPTY) if record else None

    fired = outputs[selected]
    if matches is None:
        literals = np.broadcast_to(literal_rows[0], (selected.size, literal_rows.shape[1]))
    else:
        literals = literal_rows[_choose_patches(matches[selected], fired, rng.random(selected.size))]

    rows = active[selected]
    gets_type_i = (bank.polarity[rows] > 0) == (target_y == 1)
    type_i = rows[gets_type_i]
    type_ii = rows[~gets_type_i]
    # Type I and Type II rows are disjoint, so each update reads pre-step states.
    if type_i.size:
        deltas = type_i_deltas(
            fired[gets_type_i], literals[gets_type_i], s=hyperparams.s, rng=rng,
            boost=hyperparams.boost_true_positive,
        )
        states[type_i] = np.clip(states[type_i] + deltas, 1, matrix.max_state)
    if type_ii.size:
        current = states[type_ii]
        hits = type_ii_deltas(fired[~gets_type_i], literals[~gets_type_i], current, N)
        current += hits.astype(current.dtype)
        states[type_ii] = current

    weight_changed = _EMPTY
    if hyperparams.weighted:
        up = rows[gets_type_i & fired]
        down = rows[~gets_type_i & fired]
        bank.weights[up] += 1
        bank.weights[down] = np.maximum(bank.weights[down] - 1, 1)
        if record:
            weight_changed = np.concatenate([up, down])
    return FeedbackEvents(vote, probability, type_i, type_ii, weight_changed) if record else None


def train_step(
    bank: ClauseBank,
    sample: Any,
    target_y: int,
    mask: Optional[DropMask],
    rng: np.random.Generator,
    hyperparams: Hyperparams,
    *,
    on_feedback: Optional[FeedbackHook] = None,
) -> ClauseBank:
    """Train one clause bank on one sample toward `target_y`; masked clauses are skipped."""

    events = train_on_literals(
        bank,
        literal_rows_of(sample),
        target_y,
        active_clauses(bank, mask),
        rng,
        hyperparams,
        record=on_feedback is not None,
    )
    if on_feedback is not None and events is not None:
        on_feedback(events)
    return bank


def label_indices(model: MulticlassModel, labels: np.ndarray) -> np.ndarray:
    """Positions of `labels` in the model class table."""

    lookup = {label: index for index, label in enumerate(model.labels)}
    try:
        return np.array(
            [lookup[label.item() if hasattr(label, "item") else label] for label in labels],
            dtype=np.int64,
        )
    except KeyError as exc:
        raise UnknownClassError(f"label {exc.args[0]!r} is not in the class table {model.labels}") from exc


def _accuracy(model: MulticlassModel, dataset: BooleanDataset) -> float:
    if len(dataset) == 0:
        return 0.0
    return float(np.mean(predict(model, dataset.features) == label_indices(model, dataset.labels)))


# Patch rows for the whole dataset are kept in memory up to this many bytes.
LITERAL_CACHE_BYTES = 512 * 1024 * 1024


def _literal_table(model: MulticlassModel, dataset: BooleanDataset) -> Callable[[int], np.ndarray]:
    """Literal rows per sample index, encoded once per dataset where memory allows."""

    if model.geometry is None:
        flat = dataset.features.reshape(len(dataset), -1)
        table = np.concatenate([flat, 1 - flat], axis=1).astype(np.uint8)[:, None, :]
        return table.__getitem__
    first = encode_literals(model, dataset.features[0])
    if first.nbytes * len(dataset) > LITERAL_CACHE_BYTES:
        logger.debug("tm.fit.literals_on_demand", extra={"bytes": first.nbytes * len(dataset)})
        return lambda index: encode_literals(model, dataset.features[index])
    table = np.empty((len(dataset), *first.shape), dtype=np.uint8)
    table[0] = first
    for index in range(1, len(dataset)):
        table[index] = encode_literals(model, dataset.features[index])
    return table.__getitem__


def fit(
    model: MulticlassModel,
    dataset: BooleanDataset,
    *,
    streams: Optional[RandomStreams] = None,
    epochs: Optional[int] = None,
    validation: Optional[BooleanDataset] = None,
    drop_clause: bool = True,
    on_epoch: Optional[Callable[[EpochMetrics], None]] = None,
    on_feedback: Optional[FeedbackHook] = None,
) -> FitResult:
    """Train `model` in place for `epochs` (default: hyperparams.epochs).

    Each epoch samples one drop mask per clause bank from the mask stream, then
    visits a shuffled ordering of the samples. A sample of class c trains bank c
    toward 1 and one uniformly chosen other bank toward 0; binary models train
    their single bank toward (label == labels[1]). With ``drop_clause=False`` no
    masks are built at all.
    """

    if len(dataset) == 0:
        raise EmptyDatasetError("cannot fit on a dataset without samples")
    model.validate()
    hp = model.hyperparams
    streams = streams or RandomStreams.from_seed(hp.seed)
    epochs = hp.epochs if epochs is None else epochs
    targets = label_indices(model, dataset.labels)
    sample_rows = _literal_table(model, dataset)
    record = on_feedback is not None

    result = FitResult(model=model)
    logger.info(
        "tm.fit.start",
        extra={
            "samples": len(dataset),
            "classes": model.n_classes,
            "clauses": hp.clauses,
            "drop_clause": hp.drop_clause,
            "epochs": epochs,
        },
    )
    for epoch in range(epochs):
        started = time.perf_counter()
        masks: List[Optional[DropMask]] = [None] * len(model.banks)
        if drop_clause:
            masks = [
                sample_mask(bank.n_clauses, hp.drop_clause, streams.mask, epoch=epoch)
                for bank in model.banks
            ]
        actives = [active_clauses(bank, mask) for bank, mask in zip(model.banks, masks)]

        for index in streams.shuffle.permutation(len(dataset)):
            rows = sample_rows(int(index))
            target = int(targets[index])
            if model.binary:
                pairs = [(0, int(target == 1))]
            else:
                other = int(streams.shuffle.integers(model.n_classes - 1))
                other += int(other >= target)
                pairs = [(target, 1), (other, 0)]
            for bank_index, y in pairs:
                events = train_on_literals(
                    model.banks[bank_index], rows, y, actives[bank_index], streams.feedback, hp,
                    record=record,
                )
                if on_feedback is not None and events is not None:
                    on_feedback(events)

        seconds = time.perf_counter() - started
        active_fraction = (
            float(np.mean([mask.active_fraction for mask in masks if mask is not None]))
            if drop_clause
            else 1.0
        )
        metrics = EpochMetrics(
            epoch=epoch,
            seconds=seconds,
            active_fraction=active_fraction,
            eval_accuracy=_accuracy(model, validation) if validation is not None else None,
        )
        result.history.append(metrics)
        logger.info(
            "tm.fit.epoch",
            extra={
                "epoch": epoch,
                "seconds": round(seconds, 6),
                "active_fraction": active_fraction,
                "eval_accuracy": metrics.eval_accuracy,
            },
        )
        if on_epoch is not None:
            on_epoch(metrics)

    logger.info("tm.fit.complete", extra={"epochs": epochs, "fingerprint": model.fingerprint()})
    return result


def accuracy(model: MulticlassModel, dataset: BooleanDataset) -> float:
    """Fraction of samples whose predicted label matches."""

    return _accuracy(model, dataset)
