"""Synthetic boolean datasets: XOR variants, 2D pattern-XOR images, random bits."""

from __future__ import annotations

import numpy as np

from DropClause.tm_core.models import BooleanDataset


def xor_dataset() -> BooleanDataset:
    """The four exact 2-bit XOR cases, labels 0/1."""

    features = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=np.uint8)
    return BooleanDataset(features=features, labels=np.bitwise_xor(features[:, 0], features[:, 1]))


def noisy_xor(
    samples: int,
    rng: np.random.Generator,
    *,
    noise: float = 0.3,
    extra_features: int = 0,
) -> BooleanDataset:
    """Random bits labelled x0 XOR x1, each label flipped with probability `noise`.

    `extra_features` appends irrelevant random bits.
    """

    if not 0.0 <= noise <= 1.0:
        raise ValueError("noise must lie in [0, 1]")
    features = rng.integers(0, 2, size=(samples, 2 + extra_features), dtype=np.uint8)
    labels = np.bitwise_xor(features[:, 0], features[:, 1])
    flips = rng.random(samples) < noise
    return BooleanDataset(features=features, labels=np.where(flips, 1 - labels, labels))


def pattern_xor_images(samples: int, rng: np.random.Generator, *, size: int = 4) -> BooleanDataset:
    """size × size images holding one 2 × 2 pattern at a random location.

    The pattern's bottom row is always [1, 1]; its top row [a, b] sets the label
    a XOR b. Everything outside the pattern is 0.
    """

    if size < 2:
        raise ValueError("images must be at least 2 × 2")
    images = np.zeros((samples, size, size), dtype=np.uint8)
    top = rng.integers(0, 2, size=(samples, 2), dtype=np.uint8)
    origins = rng.integers(0, size - 1, size=(samples, 2))
    for index, (row, col) in enumerate(origins):
        images[index, row, col : col + 2] = top[index]
        images[index, row + 1, col : col + 2] = 1
    return BooleanDataset(features=images, labels=np.bitwise_xor(top[:, 0], top[:, 1]))


def random_binary(
    samples: int, features: int, rng: np.random.Generator, *, classes: int = 2
) -> BooleanDataset:
    """Uniform random bits with uniform random labels in [0, classes)."""

    return BooleanDataset(
        features=rng.integers(0, 2, size=(samples, features), dtype=np.uint8),
        labels=rng.integers(0, classes, size=samples),
    )
