"""Dataset loading for the CLI: bits CSV, IDX images, or label,text CSV."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Hashable, List, Mapping, Optional, Tuple

import numpy as np

from DropClause.booleanize.cache import load_binarized, save_binarized
from DropClause.booleanize.exceptions import DatasetFormatError
from DropClause.booleanize.loaders import load_bits_csv, load_idx, load_text_csv
from DropClause.booleanize.models import BinarizationConfig, Vocabulary
from DropClause.booleanize.text import build_vocab, text_to_bow, tokenize
from DropClause.booleanize.thresholding import binarize_images
from DropClause.tm_core.models import BooleanDataset

from .config import RunConfig

logger = logging.getLogger(__name__)


class DatasetKind(str, Enum):
    BITS = "bits"
    IDX = "idx"
    TEXT = "text"


@dataclass(frozen=True)
class LoadedData:
    dataset: BooleanDataset
    preprocessing: Dict[str, Any]
    vocabulary: Optional[Vocabulary] = None
    tokens: Tuple[Tuple[str, ...], ...] = field(default_factory=tuple)


def require_file(path: Optional[Path], what: str = "dataset") -> Path:
    if path is None:
        raise FileNotFoundError(f"{what} path is required")
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"{what} not found: {path}")
    return path


def class_table(labels: np.ndarray) -> Tuple[Hashable, ...]:
    """Sorted distinct labels as plain Python values."""

    values = {label.item() if hasattr(label, "item") else label for label in labels}
    return tuple(sorted(values))


def _bow(tokens: List[List[str]], vocabulary: Vocabulary) -> np.ndarray:
    if not tokens:
        return np.zeros((0, len(vocabulary)), dtype=np.uint8)
    return np.stack([text_to_bow(row, vocabulary).bits for row in tokens])


def _binarized_idx(
    path: Path,
    labels_path: Optional[Path],
    binarization: BinarizationConfig,
    cache: Optional[Path],
) -> BooleanDataset:
    """Binarize IDX images, reusing `cache` when it was built from the same files and settings."""

    labels_path = require_file(labels_path, "label file")
    source = {
        "images": str(path.resolve()),
        "labels": str(labels_path.resolve()),
        "binarization": binarization.to_dict(),
    }
    if cache is not None and Path(cache).exists():
        dataset, metadata = load_binarized(cache)
        if metadata == source:
            logger.info("cli.dataset.cache_hit", extra={"cache": str(cache), "samples": len(dataset)})
            return dataset
        logger.info("cli.dataset.cache_stale", extra={"cache": str(cache)})
    images = load_idx(path, labels_path)
    dataset = BooleanDataset(features=binarize_images(images.images, binarization), labels=images.labels)
    if cache is not None:
        save_binarized(cache, dataset, source)
        logger.info("cli.dataset.cache_written", extra={"cache": str(cache), "samples": len(dataset)})
    return dataset


def _load(
    kind: DatasetKind,
    path: Path,
    labels_path: Optional[Path],
    *,
    binarization: BinarizationConfig,
    stem: bool,
    vocabulary: Optional[Vocabulary],
    vocab_size: int,
    min_freq: int,
    cache: Optional[Path] = None,
) -> LoadedData:
    path = require_file(path)
    if cache is not None and kind is not DatasetKind.IDX:
        raise ValueError("--cache applies to IDX image datasets only")
    if kind is DatasetKind.BITS:
        dataset = load_bits_csv(path)
        return LoadedData(dataset, {"kind": kind.value, "features": int(dataset.features.shape[1])})
    if kind is DatasetKind.IDX:
        return LoadedData(
            _binarized_idx(path, labels_path, binarization, cache),
            {"kind": kind.value, "binarization": binarization.to_dict()},
        )
    documents = load_text_csv(path)
    tokens = [tokenize(text, stem=stem) for text in documents.texts]
    if vocabulary is None:
        vocabulary = build_vocab(tokens, vocab_size, min_freq, stem=stem)
    dataset = BooleanDataset(features=_bow(tokens, vocabulary), labels=np.asarray(documents.labels, dtype=object))
    return LoadedData(
        dataset,
        {"kind": kind.value, "vocabulary": vocabulary.to_dict()},
        vocabulary=vocabulary,
        tokens=tuple(tuple(row) for row in tokens),
    )


def load_training_data(
    kind: DatasetKind,
    path: Path,
    labels_path: Optional[Path],
    config: RunConfig,
    cache: Optional[Path] = None,
) -> LoadedData:
    """Load and booleanize a dataset, building a vocabulary for text."""

    return _load(
        kind,
        path,
        labels_path,
        binarization=config.binarization(),
        stem=config.stem,
        vocabulary=None,
        vocab_size=config.vocab_size,
        min_freq=config.min_freq,
        cache=cache,
    )


def load_like_model(
    preprocessing: Mapping[str, Any],
    path: Path,
    labels_path: Optional[Path],
    cache: Optional[Path] = None,
) -> LoadedData:
    """Load a dataset with the preprocessing recorded in a model file."""

    try:
        kind = DatasetKind(preprocessing.get("kind", DatasetKind.BITS.value))
    except ValueError as exc:
        raise DatasetFormatError(f"unknown dataset kind in model: {preprocessing.get('kind')!r}") from exc
    vocabulary = (
        Vocabulary.from_dict(preprocessing["vocabulary"]) if kind is DatasetKind.TEXT else None
    )
    binarization = BinarizationConfig.from_dict(preprocessing.get("binarization") or {})
    return _load(
        kind,
        path,
        labels_path,
        binarization=binarization,
        stem=vocabulary.stem if vocabulary is not None else False,
        vocabulary=vocabulary,
        vocab_size=len(vocabulary) if vocabulary is not None else 1,
        min_freq=1,
        cache=cache,
    )
