"""Per-epoch Bernoulli clause masks."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DropMask:
    """Clause j takes part in training this epoch iff bits[j] is 1."""

    bits: np.ndarray
    p: float
    epoch: int = 0

    def __post_init__(self) -> None:
        bits = np.asarray(self.bits, dtype=bool).copy()
        if bits.ndim != 1:
            raise ValueError("mask bits must be one-dimensional")
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @classmethod
    def full(cls, clauses: int, epoch: int = 0) -> "DropMask":
        return cls(bits=np.ones(clauses, dtype=bool), p=0.0, epoch=epoch)

    def __len__(self) -> int:
        return int(self.bits.size)

    @property
    def active_indices(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    @property
    def active_fraction(self) -> float:
        return float(self.bits.mean()) if self.bits.size else 0.0


def sample_mask(clauses: int, p: float, rng: np.random.Generator, *, epoch: int = 0) -> DropMask:
    """Drop each clause independently with probability p (p=0 keeps all, p=1 drops all)."""

    if not 0.0 <= p <= 1.0:
        raise ValueError(f"drop probability must lie in [0, 1], got {p}")
    if clauses < 1:
        raise ValueError("clause count must be at least 1")
    # random() is in [0, 1): p=0 never drops and p=1 always does.
    mask = DropMask(bits=rng.random(clauses) >= p, p=p, epoch=epoch)
    logger.debug(
        "drop_clause.mask",
        extra={"epoch": epoch, "p": p, "active_fraction": mask.active_fraction},
    )
    return mask
