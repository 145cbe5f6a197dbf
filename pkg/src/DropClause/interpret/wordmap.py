"""Literal frequency over the clauses a text sample triggers."""

from __future__ import annotations

import logging
from collections import Counter
from typing import Any, Iterable, Optional

import numpy as np

from DropClause.booleanize.models import Vocabulary
from DropClause.tm_core.clauses import classify, patch_matches
from DropClause.tm_core.models import BooleanSample, EvalMode, MulticlassModel

from .clauses import included_literals, literal_names, supporting_clauses
from .exceptions import GeometryMismatchError, VocabularyMismatchError
from .models import FeatureFrequency, RankedLiteral

logger = logging.getLogger(__name__)


def _check_vocabulary(model: MulticlassModel, vocabulary: Optional[Vocabulary]) -> None:
    if vocabulary is None:
        return
    recorded = model.preprocessing.get("vocabulary")
    if recorded and recorded.get("corpus_hash") and vocabulary.corpus_hash:
        if recorded["corpus_hash"] != vocabulary.corpus_hash:
            raise VocabularyMismatchError("sample vocabulary differs from the one the model was trained with")


def word_frequency_map(
    model: MulticlassModel,
    sample: Any,
    top_m: int = 100,
    *,
    vocabulary: Optional[Vocabulary] = None,
) -> FeatureFrequency:
    """Count included literals across the triggered clauses that support the prediction."""

    if model.geometry is not None:
        raise GeometryMismatchError("frequency maps apply to flat models")
    if top_m < 0:
        raise ValueError("top_m cannot be negative")
    bits = sample.bits if isinstance(sample, BooleanSample) else np.asarray(sample, dtype=np.uint8)
    if bits.size != model.n_features:
        raise VocabularyMismatchError(
            f"sample has {bits.size} features but the model expects {model.n_features}"
        )
    _check_vocabulary(model, vocabulary)
    names = literal_names(model, vocabulary)

    predicted = classify(model, bits)
    bank, candidates = supporting_clauses(model, predicted)
    literals = np.concatenate([bits, 1 - bits])[None, :]
    fires = patch_matches(
        bank.matrix.states, bank.matrix.states_per_action, literals, EvalMode.INFER, candidates
    )[:, 0]
    triggered = candidates[fires]

    counts: Counter[int] = Counter()
    for clause in triggered:
        counts.update(int(literal) for literal in included_literals(bank, clause))
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))[:top_m]
    frequency = FeatureFrequency(
        predicted=predicted,
        triggered=tuple(int(clause) for clause in triggered),
        counts=dict(counts),
        ranked=tuple(
            RankedLiteral(
                literal=literal,
                name=names[literal],
                count=count,
                negated=literal >= model.n_features,
            )
            for literal, count in ranked
        ),
    )
    logger.debug(
        "interpret.wordmap",
        extra={"predicted": str(predicted), "triggered": len(triggered), "ranked": len(frequency.ranked)},
    )
    return frequency


def annotate(tokens: Iterable[str], frequency: FeatureFrequency) -> str:
    """Mark tokens that appear as non-negated ranked literals with [brackets]."""

    highlighted = {item.name for item in frequency.ranked if not item.negated}
    return " ".join(f"[{token}]" if token in highlighted else token for token in tokens)
