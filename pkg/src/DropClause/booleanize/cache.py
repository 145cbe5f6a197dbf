"""Binarized dataset cache: ``TMDB`` magic, version, JSON header, packed bits."""

from __future__ import annotations

import json
import struct
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

import numpy as np

from DropClause.tm_core.exceptions import DimensionError
from DropClause.tm_core.models import BooleanDataset

from .exceptions import DatasetFormatError

CACHE_MAGIC = b"TMDB"
CACHE_VERSION = 1
_PREFIX = struct.Struct("<4sHI")


def save_binarized(
    path: Path, dataset: BooleanDataset, metadata: Optional[Mapping[str, Any]] = None
) -> Path:
    """Write booleanized features and labels; the preprocessing settings ride in the header."""

    header = {
        "shape": list(dataset.features.shape),
        "labels": [label.item() if hasattr(label, "item") else label for label in dataset.labels],
        "metadata": dict(metadata or {}),
    }
    encoded = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    payload = np.packbits(dataset.features.reshape(-1)).tobytes()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(_PREFIX.pack(CACHE_MAGIC, CACHE_VERSION, len(encoded)) + encoded + payload)
    return path


def load_binarized(path: Path) -> Tuple[BooleanDataset, Dict[str, Any]]:
    path = Path(path)
    blob = path.read_bytes()
    if len(blob) < _PREFIX.size:
        raise DatasetFormatError(f"{path}: truncated cache header")
    magic, version, header_length = _PREFIX.unpack_from(blob)
    if magic != CACHE_MAGIC:
        raise DatasetFormatError(f"{path}: bad magic {magic!r}")
    if version != CACHE_VERSION:
        raise DatasetFormatError(f"{path}: unsupported cache version {version}")
    start = _PREFIX.size
    try:
        header = json.loads(blob[start : start + header_length].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise DatasetFormatError(f"{path}: unreadable cache header") from exc
    try:
        shape = tuple(int(dim) for dim in header["shape"])
        labels = np.asarray(header["labels"])
        metadata = dict(header.get("metadata") or {})
    except (AttributeError, KeyError, TypeError, ValueError) as exc:
        raise DatasetFormatError(f"{path}: invalid cache header: {exc!r}") from exc
    if any(dim < 0 for dim in shape):
        raise DatasetFormatError(f"{path}: negative dimension in cache shape {shape}")
    count = int(np.prod(shape))
    packed = np.frombuffer(blob, dtype=np.uint8, offset=start + header_length)
    if packed.size * 8 < count:
        raise DatasetFormatError(f"{path}: truncated bit payload")
    features = np.unpackbits(packed, count=count).reshape(shape)
    try:
        dataset = BooleanDataset(features=features, labels=labels)
    except DimensionError as exc:
        raise DatasetFormatError(f"{path}: {exc}") from exc
    return dataset, metadata
