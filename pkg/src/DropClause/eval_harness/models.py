"""Evaluation results, corruption specs, and robustness rows."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Hashable, Tuple

import numpy as np

from .exceptions import CorruptionRangeError


class CorruptionKind(str, Enum):
    IMPULSE_NOISE = "impulse_noise"
    TRANSLATE = "translate"
    BLOCK_OCCLUSION = "block_occlusion"
    STRIPE = "stripe"


@dataclass(frozen=True)
class CorruptionSpec:
    """One corruption and its magnitude.

    impulse_noise flips each bit with `rate` ∈ [0, 1]; translate shifts by
    `shift` = (dr, dc) with zero fill; block_occlusion zeroes a random
    `block` × `block` square; stripe sets one random row to 1.
    """

    kind: CorruptionKind
    rate: float = 0.02
    shift: Tuple[int, int] = (2, 2)
    block: int = 8
    apply_probability: float = 0.5

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", CorruptionKind(self.kind))
        object.__setattr__(self, "shift", tuple(int(value) for value in self.shift))
        if not 0.0 <= self.rate <= 1.0:
            raise CorruptionRangeError(f"impulse rate must lie in [0, 1], got {self.rate}")
        if self.block < 1:
            raise CorruptionRangeError(f"occlusion block must be at least 1, got {self.block}")
        if len(self.shift) != 2:
            raise CorruptionRangeError("shift must be a (rows, cols) pair")
        if not 0.0 <= self.apply_probability <= 1.0:
            raise CorruptionRangeError("apply_probability must lie in [0, 1]")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "rate": self.rate,
            "shift": list(self.shift),
            "block": self.block,
            "apply_probability": self.apply_probability,
        }


def plain(label: Any) -> Any:
    return label.item() if hasattr(label, "item") else label


@dataclass(frozen=True)
class EvaluationResult:
    accuracy: float
    per_class_accuracy: Dict[Hashable, float]
    confusion: np.ndarray
    labels: Tuple[Hashable, ...]
    mean_inference_seconds: float
    samples: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "accuracy": self.accuracy,
            "per_class_accuracy": {str(plain(k)): v for k, v in self.per_class_accuracy.items()},
            "confusion": self.confusion.tolist(),
            "labels": [plain(label) for label in self.labels],
            "mean_inference_seconds": self.mean_inference_seconds,
            "samples": self.samples,
        }


@dataclass(frozen=True)
class RobustnessRow:
    model: str
    clean: float
    corrupt: float
    corrupt_spread: float = 0.0
    draws: int = 1
    corrupt_runs: Tuple[float, ...] = field(default_factory=tuple)

    @property
    def delta(self) -> float:
        return self.clean - self.corrupt
