"""Independent random streams for feedback, drop masks, and shuffling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(slots=True)
class RandomStreams:
    """Three generators spawned from one seed.

    Drop-mask sampling draws only from `mask`, so a run at p=0 consumes the
    feedback and shuffle streams exactly like a run that never builds masks.
    """

    feedback: np.random.Generator
    mask: np.random.Generator
    shuffle: np.random.Generator

    @classmethod
    def from_seed(cls, seed: int) -> "RandomStreams":
        feedback_seq, mask_seq, shuffle_seq = np.random.SeedSequence(seed).spawn(3)
        return cls(
            feedback=np.random.default_rng(feedback_seq),
            mask=np.random.default_rng(mask_seq),
            shuffle=np.random.default_rng(shuffle_seq),
        )
