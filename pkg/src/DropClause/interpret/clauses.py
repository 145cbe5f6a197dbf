"""DNF clause listings for flat and convolutional models."""

from __future__ import annotations

import logging
from typing import Hashable, List, Optional, Tuple

import numpy as np

from DropClause.booleanize.models import Vocabulary
from DropClause.conv_tm.patches import patches_for
from DropClause.tm_core.clauses import patch_matches
from DropClause.tm_core.models import ClauseBank, EvalMode, MulticlassModel

from .exceptions import GeometryMismatchError, VocabularyMismatchError
from .models import ClauseEntry, ClauseReport

logger = logging.getLogger(__name__)


def literal_names(model: MulticlassModel, vocabulary: Optional[Vocabulary] = None) -> List[str]:
    """Display names for the model's 2o literals (features, then their negations)."""

    features = model.n_features
    geometry = model.geometry
    if geometry is not None:
        positive, negative = [], []
        for index in range(features):
            kind, where = geometry.describe_feature(index)
            if kind == "pixel":
                dr, dc, channel = where
                name = f"p[{dr},{dc}]" if geometry.channels == 1 else f"p[{dr},{dc},{channel}]"
                positive.append(name)
                negative.append(f"¬{name}")
            else:
                positive.append(f"{kind}>{where[0]}")
                negative.append(f"{kind}≤{where[0]}")
        return positive + negative
    if vocabulary is not None:
        if len(vocabulary) != features:
            raise VocabularyMismatchError(
                f"vocabulary has {len(vocabulary)} tokens but the model has {features} features"
            )
        return list(vocabulary.tokens) + [f"NOT {token}" for token in vocabulary.tokens]
    names = [f"x{index + 1}" for index in range(features)]
    return names + [f"¬{name}" for name in names]


def included_literals(bank: ClauseBank, clause: int) -> np.ndarray:
    return np.flatnonzero(bank.matrix.states[clause] > bank.matrix.states_per_action)


def supporting_clauses(model: MulticlassModel, label: Hashable) -> Tuple[ClauseBank, np.ndarray]:
    """The clause bank of `label` and the indices of its clauses that vote for it."""

    bank = model.bank_for(label)
    polarity = bank.polarity
    wanted = -1 if model.binary and model.label_index(label) == 0 else 1
    return bank, np.flatnonzero(polarity == wanted)


def rank_by_weight(bank: ClauseBank, candidates: np.ndarray, k: int) -> np.ndarray:
    """Top-k candidates by weight, ties by clause index; k beyond the pool truncates."""

    if k < 0:
        raise ValueError("k cannot be negative")
    candidates = np.asarray(candidates, dtype=np.int64)
    order = np.lexsort((candidates, -bank.weights[candidates].astype(np.int64)))
    return candidates[order[:k]]


def _entries(
    bank: ClauseBank, clauses: np.ndarray, names: List[str]
) -> Tuple[ClauseEntry, ...]:
    polarity = bank.polarity
    return tuple(
        ClauseEntry(
            clause=int(clause),
            weight=int(bank.weights[clause]),
            polarity=int(polarity[clause]),
            literals=tuple(names[literal] for literal in included_literals(bank, clause)),
        )
        for clause in clauses
    )


def export_clauses(
    model: MulticlassModel,
    class_label: Hashable,
    k: int,
    *,
    vocabulary: Optional[Vocabulary] = None,
) -> ClauseReport:
    """Top-k weighted clauses of the class bank rendered as conjunctions."""

    bank = model.bank_for(class_label)
    chosen = rank_by_weight(bank, np.arange(bank.n_clauses), k)
    report = ClauseReport(
        class_label=class_label,
        k=k,
        entries=_entries(bank, chosen, literal_names(model, vocabulary)),
    )
    logger.debug("interpret.export", extra={"class": str(class_label), "k": k, "entries": len(chosen)})
    return report


def patch_clauses(
    model: MulticlassModel,
    image: np.ndarray,
    class_label: Hashable,
    row: int,
    col: int,
    k: int,
) -> ClauseReport:
    """Top-k weighted supporting clauses of a class that fire on the patch at grid (row, col)."""

    geometry = model.geometry
    if geometry is None:
        raise GeometryMismatchError("patch listings need a convolutional model")
    rows, cols = geometry.grid_shape
    if not (0 <= row < rows and 0 <= col < cols):
        raise GeometryMismatchError(f"patch ({row}, {col}) outside the {rows}×{cols} grid")
    try:
        patch_set = patches_for(image, geometry)
    except ValueError as exc:
        raise GeometryMismatchError(str(exc)) from exc
    bank, candidates = supporting_clauses(model, class_label)
    literals = patch_set.literals[row * cols + col][None, :]
    fires = patch_matches(
        bank.matrix.states, bank.matrix.states_per_action, literals, EvalMode.INFER, candidates
    )[:, 0]
    chosen = rank_by_weight(bank, candidates[fires], k)
    return ClauseReport(
        class_label=class_label, k=k, entries=_entries(bank, chosen, literal_names(model))
    )
