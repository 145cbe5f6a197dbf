"""Post-binarization image corruptions and the MNIST-C file loader."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Sequence

import numpy as np

from DropClause.booleanize.exceptions import DatasetFormatError
from DropClause.booleanize.models import ImageDataset
from DropClause.tm_core.models import BooleanDataset

from .exceptions import CorruptionRangeError
from .models import CorruptionKind, CorruptionSpec

logger = logging.getLogger(__name__)


def _shift(image: np.ndarray, rows: int, cols: int) -> np.ndarray:
    height, width = image.shape[:2]
    shifted = np.zeros_like(image)
    if abs(rows) >= height or abs(cols) >= width:
        return shifted
    src_r = slice(max(-rows, 0), height - max(rows, 0))
    dst_r = slice(max(rows, 0), height - max(-rows, 0))
    src_c = slice(max(-cols, 0), width - max(cols, 0))
    dst_c = slice(max(cols, 0), width - max(-cols, 0))
    shifted[dst_r, dst_c] = image[src_r, src_c]
    return shifted


def corrupt_image(image: np.ndarray, spec: CorruptionSpec, rng: np.random.Generator) -> np.ndarray:
    """Apply one corruption to a binary (H, W[, Z]) image; the input is not modified."""

    image = np.asarray(image, dtype=np.uint8)
    if image.ndim not in (2, 3):
        raise CorruptionRangeError(f"expected a 2D or 3D binary image, got shape {image.shape}")
    height, width = image.shape[:2]
    if spec.kind is CorruptionKind.IMPULSE_NOISE:
        flips = (rng.random(image.shape) < spec.rate).astype(np.uint8)
        return image ^ flips
    if spec.kind is CorruptionKind.TRANSLATE:
        return _shift(image, *spec.shift)
    if spec.kind is CorruptionKind.BLOCK_OCCLUSION:
        if spec.block > min(height, width):
            raise CorruptionRangeError(f"occlusion block {spec.block} exceeds image {height}×{width}")
        row = int(rng.integers(0, height - spec.block + 1))
        col = int(rng.integers(0, width - spec.block + 1))
        occluded = image.copy()
        occluded[row : row + spec.block, col : col + spec.block] = 0
        return occluded
    striped = image.copy()
    striped[int(rng.integers(0, height))] = 1
    return striped


def corrupt_dataset(
    dataset: BooleanDataset,
    specs: Sequence[CorruptionSpec],
    rng: np.random.Generator,
    *,
    apply_probability: float | None = None,
) -> BooleanDataset:
    """Per image: corrupt with probability p (default: the first spec's), kind chosen uniformly."""

    if not specs:
        return dataset
    probability = specs[0].apply_probability if apply_probability is None else apply_probability
    if not 0.0 <= probability <= 1.0:
        raise CorruptionRangeError("apply probability must lie in [0, 1]")
    features = dataset.features.copy()
    corrupted = 0
    for index in range(len(features)):
        if rng.random() >= probability:
            continue
        spec = specs[int(rng.integers(len(specs)))]
        features[index] = corrupt_image(features[index], spec, rng)
        corrupted += 1
    logger.debug(
        "robust.corrupt",
        extra={"samples": len(features), "corrupted": corrupted, "kinds": [s.kind.value for s in specs]},
    )
    return BooleanDataset(features=features, labels=dataset.labels)


def load_corruption_set(root: Path, corruption: str) -> ImageDataset:
    """Read ``<root>/<corruption>/test_images.npy`` and ``test_labels.npy`` (MNIST-C layout)."""

    folder = Path(root) / corruption
    try:
        images = np.load(folder / "test_images.npy")
        labels = np.load(folder / "test_labels.npy")
    except ValueError as exc:
        raise DatasetFormatError(f"{folder}: unreadable corruption arrays") from exc
    if images.ndim == 4 and images.shape[-1] == 1:
        images = images[..., 0]
    return ImageDataset(images=images.astype(np.uint8), labels=labels.astype(np.int64))
