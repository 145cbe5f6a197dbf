"""Synonym-substitution perturbation of token sequences."""

from __future__ import annotations

from pathlib import Path
from typing import Dict, List, Mapping, Sequence

import numpy as np

from .exceptions import SynonymMapError


def load_synonym_map(path: Path) -> Dict[str, str]:
    """Read ``word<TAB>synonym`` lines; blank lines and ``#`` comments are skipped."""

    mapping: Dict[str, str] = {}
    path = Path(path)
    for number, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = line.rstrip("\n").split("\t")
        if len(fields) != 2 or not fields[0].strip() or not fields[1].strip():
            raise SynonymMapError(f"{path}:{number}: expected 'word<TAB>synonym', got {line!r}")
        mapping[fields[0].strip().lower()] = fields[1].strip().lower()
    return mapping


def perturb_text(
    tokens: Sequence[str],
    synonym_map: Mapping[str, str],
    rng: np.random.Generator,
    *,
    probability: float = 0.5,
) -> List[str]:
    """With probability p, swap one uniformly chosen in-map token for its synonym.

    Every occurrence of the chosen word is swapped, so in bag-of-words space the
    sample moves by at most two bits.
    """

    perturbed = list(tokens)
    if rng.random() >= probability:
        return perturbed
    candidates = [position for position, token in enumerate(perturbed) if token in synonym_map]
    if not candidates:
        return perturbed
    word = perturbed[candidates[int(rng.integers(len(candidates)))]]
    return [synonym_map[word] if token == word else token for token in perturbed]
