"""IDX and CSV dataset readers (and an IDX writer for fixtures and exports)."""

from __future__ import annotations

import gzip
import logging
import struct
from pathlib import Path
from typing import BinaryIO, Tuple

import numpy as np
import pandas as pd
import pandera.pandas as pa

from DropClause.tm_core.models import BooleanDataset

from .exceptions import DatasetFormatError
from .models import ImageDataset, TextDataset

logger = logging.getLogger(__name__)

_IDX_UBYTE = 0x08
LABEL_COLUMN = "label"


def _open(path: Path) -> BinaryIO:
    if path.suffix == ".gz":
        return gzip.open(path, "rb")  # type: ignore[return-value]
    return path.open("rb")


def read_idx(path: Path) -> np.ndarray:
    """Read an unsigned-byte IDX file: zero bytes, type 0x08, ndim, big-endian u32 dims."""

    path = Path(path)
    with _open(path) as handle:
        header = handle.read(4)
        if len(header) != 4 or header[:2] != b"\x00\x00" or header[2] != _IDX_UBYTE:
            raise DatasetFormatError(f"{path}: not an unsigned-byte IDX file (magic {header!r})")
        ndim = header[3]
        raw_dims = handle.read(4 * ndim)
        if len(raw_dims) != 4 * ndim:
            raise DatasetFormatError(f"{path}: truncated IDX dimension header")
        dims: Tuple[int, ...] = struct.unpack(f">{ndim}I", raw_dims)
        expected = int(np.prod(dims)) if dims else 0
        payload = handle.read()
    if len(payload) < expected:
        raise DatasetFormatError(
            f"{path}: truncated IDX payload ({len(payload)} of {expected} bytes)"
        )
    return np.frombuffer(payload[:expected], dtype=np.uint8).reshape(dims).copy()


def write_idx(path: Path, array: np.ndarray) -> Path:
    array = np.ascontiguousarray(array, dtype=np.uint8)
    header = bytes([0, 0, _IDX_UBYTE, array.ndim]) + struct.pack(f">{array.ndim}I", *array.shape)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "wb") as handle:  # type: ignore[operator]
        handle.write(header + array.tobytes())
    return path


def load_idx(images_path: Path, labels_path: Path, *, num_classes: int | None = None) -> ImageDataset:
    """Load an IDX image file and its IDX label file in stored order."""

    images = read_idx(images_path)
    labels = read_idx(labels_path)
    if images.ndim < 3 and images.size:
        raise DatasetFormatError(f"{images_path}: expected (m, rows, cols[, channels]) images")
    if labels.ndim != 1:
        raise DatasetFormatError(f"{labels_path}: expected a one-dimensional label file")
    if num_classes is not None and labels.size and int(labels.max()) >= num_classes:
        raise DatasetFormatError(
            f"{labels_path}: label {int(labels.max())} outside [0, {num_classes})"
        )
    logger.info("booleanize.load_idx", extra={"path": str(images_path), "items": len(labels)})
    return ImageDataset(images=images, labels=labels.astype(np.int64))


_TEXT_SCHEMA = pa.DataFrameSchema(
    {
        LABEL_COLUMN: pa.Column(str, nullable=False, coerce=True),
        "text": pa.Column(str, nullable=False, coerce=True),
    },
    strict=True,
)


def _schema_checked(schema: pa.DataFrameSchema, frame: pd.DataFrame, path: Path) -> pd.DataFrame:
    try:
        return schema.validate(frame, lazy=True)
    except (pa.errors.SchemaError, pa.errors.SchemaErrors) as exc:
        raise DatasetFormatError(f"{path}: {exc}") from exc


def _read_csv(path: Path) -> pd.DataFrame:
    try:
        return pd.read_csv(path, encoding="utf-8", dtype=str, keep_default_na=False)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise DatasetFormatError(f"{path}: {exc}") from exc


def load_text_csv(path: Path) -> TextDataset:
    """Read a UTF-8 ``label,text`` CSV with a header row."""

    path = Path(path)
    frame = _schema_checked(_TEXT_SCHEMA, _read_csv(path), path)
    logger.info("booleanize.load_text_csv", extra={"path": str(path), "rows": len(frame)})
    return TextDataset(labels=tuple(frame[LABEL_COLUMN]), texts=tuple(frame["text"]))


def load_bits_csv(path: Path) -> BooleanDataset:
    """Read a CSV of 0/1 feature columns plus a ``label`` column."""

    path = Path(path)
    frame = _read_csv(path)
    if LABEL_COLUMN not in frame.columns:
        raise DatasetFormatError(f"{path}: missing '{LABEL_COLUMN}' column")
    features = [column for column in frame.columns if column != LABEL_COLUMN]
    if not features:
        raise DatasetFormatError(f"{path}: no feature columns")
    schema = pa.DataFrameSchema(
        {
            **{column: pa.Column(int, pa.Check.isin([0, 1]), coerce=True) for column in features},
            LABEL_COLUMN: pa.Column(str, nullable=False, coerce=True),
        }
    )
    frame = _schema_checked(schema, frame, path)
    logger.info("booleanize.load_bits_csv", extra={"path": str(path), "rows": len(frame)})
    return BooleanDataset(
        features=frame[features].to_numpy(dtype=np.uint8).reshape(len(frame), len(features)),
        labels=frame[LABEL_COLUMN].to_numpy(dtype=object),
    )
