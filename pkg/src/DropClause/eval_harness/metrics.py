"""Accuracy, per-class accuracy, confusion matrix, and inference timing."""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Hashable

import numpy as np
from sklearn.metrics import confusion_matrix

from DropClause.tm_core.clauses import predict
from DropClause.tm_core.exceptions import EmptyDatasetError
from DropClause.tm_core.models import BooleanDataset, MulticlassModel
from DropClause.tm_core.trainer import label_indices

from .models import EvaluationResult

logger = logging.getLogger(__name__)


def _predict_parallel(model: MulticlassModel, features: np.ndarray, threads: int) -> np.ndarray:
    if threads <= 1 or len(features) < 2:
        return predict(model, features)
    chunks = np.array_split(np.arange(len(features)), min(threads, len(features)))
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda rows: predict(model, features[rows]), chunks))
    return np.concatenate(parts)


def evaluate(model: MulticlassModel, dataset: BooleanDataset, *, threads: int = 1) -> EvaluationResult:
    """Score `model` on `dataset`; the model is only read."""

    if len(dataset) == 0:
        raise EmptyDatasetError("cannot evaluate on a dataset without samples")
    truth = label_indices(model, dataset.labels)
    started = time.perf_counter()
    predicted = _predict_parallel(model, dataset.features, threads)
    elapsed = time.perf_counter() - started

    indices = list(range(model.n_classes))
    confusion = confusion_matrix(truth, predicted, labels=indices)
    per_class: Dict[Hashable, float] = {}
    for index in indices:
        count = int(confusion[index].sum())
        if count:
            per_class[model.labels[index]] = float(confusion[index, index] / count)
    result = EvaluationResult(
        accuracy=float(np.mean(predicted == truth)),
        per_class_accuracy=per_class,
        confusion=confusion,
        labels=model.labels,
        mean_inference_seconds=elapsed / len(dataset),
        samples=len(dataset),
    )
    logger.info(
        "eval.complete",
        extra={"samples": result.samples, "accuracy": result.accuracy, "threads": threads},
    )
    return result
