"""Data models for booleanization settings and raw datasets."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Mapping, Optional, Tuple

import numpy as np

from .exceptions import DatasetFormatError


@dataclass(frozen=True)
class BinarizationConfig:
    """Adaptive Gaussian thresholding: window W, kernel sigma, offset C."""

    window: int = 11
    sigma: Optional[float] = None
    offset: float = 2.0

    def __post_init__(self) -> None:
        if self.window < 3 or self.window % 2 == 0:
            raise ValueError(f"window must be an odd integer ≥ 3, got {self.window}")
        if self.sigma is not None and self.sigma <= 0:
            raise ValueError("sigma must be positive")

    @property
    def effective_sigma(self) -> float:
        return self.sigma if self.sigma is not None else self.window / 6.0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, payload: Mapping[str, Any]) -> "BinarizationConfig":
        return cls(**dict(payload))


@dataclass(frozen=True)
class Vocabulary:
    """Dense token → feature-index map built from a corpus."""

    tokens: Tuple[str, ...]
    min_freq: int = 1
    corpus_hash: str = ""
    stem: bool = False
    index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "tokens", tuple(self.tokens))
        if len(set(self.tokens)) != len(self.tokens):
            raise ValueError("vocabulary tokens must be unique")
        object.__setattr__(self, "index", {token: i for i, token in enumerate(self.tokens)})

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: object) -> bool:
        return token in self.index

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tokens": list(self.tokens),
            "min_freq": self.min_freq,
            "corpus_hash": self.corpus_hash,
            "stem": self.stem,
        }

    @classmethod
    def from_dict(cls, payload: Mapping[str, Any]) -> "Vocabulary":
        return cls(
            tokens=tuple(payload["tokens"]),
            min_freq=int(payload.get("min_freq", 1)),
            corpus_hash=str(payload.get("corpus_hash", "")),
            stem=bool(payload.get("stem", False)),
        )


@dataclass(frozen=True)
class ImageDataset:
    """Raw grayscale or multi-channel images with integer labels."""

    images: np.ndarray
    labels: np.ndarray

    def __post_init__(self) -> None:
        if len(self.images) != len(self.labels):
            raise DatasetFormatError(
                f"{len(self.images)} images but {len(self.labels)} labels"
            )

    def __len__(self) -> int:
        return int(len(self.labels))


@dataclass(frozen=True)
class TextDataset:
    """Documents in file order with their labels."""

    labels: Tuple[str, ...]
    texts: Tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.labels) != len(self.texts):
            raise DatasetFormatError(f"{len(self.texts)} documents but {len(self.labels)} labels")

    def __len__(self) -> int:
        return len(self.texts)
