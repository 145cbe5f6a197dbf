"""Tokenization, vocabulary construction, and bag-of-words presence vectors."""

from __future__ import annotations

import hashlib
import logging
import re
from collections import Counter
from functools import lru_cache
from typing import Iterable, List, Sequence

import numpy as np

from DropClause.tm_core.models import BooleanSample

from .exceptions import EmptyInputError
from .models import Vocabulary

logger = logging.getLogger(__name__)

_PUNCTUATION = re.compile(r"[^\w\s]+")

DEFAULT_VOCAB_SIZE = 5000


@lru_cache(maxsize=1)
def _stemmer():  # type: ignore[no-untyped-def]
    from nltk.stem import PorterStemmer

    return PorterStemmer()


def tokenize(text: str, *, stem: bool = False) -> List[str]:
    """Lowercase, strip punctuation, split on whitespace; optionally Porter-stem."""

    tokens = _PUNCTUATION.sub(" ", text.lower()).split()
    if stem:
        stemmer = _stemmer()
        tokens = [stemmer.stem(token) for token in tokens]
    return tokens


def build_vocab(
    corpus: Iterable[Sequence[str]],
    size: int = DEFAULT_VOCAB_SIZE,
    min_freq: int = 1,
    *,
    stem: bool = False,
) -> Vocabulary:
    """Top-`size` tokens by frequency, ties broken lexicographically."""

    if size < 1:
        raise ValueError("vocabulary size must be positive")
    counts: Counter[str] = Counter()
    digest = hashlib.sha256()
    for tokens in corpus:
        counts.update(tokens)
        digest.update("\x1f".join(tokens).encode("utf-8"))
        digest.update(b"\x1e")
    if not counts:
        raise EmptyInputError("cannot build a vocabulary from an empty corpus")
    ranked = sorted(
        (item for item in counts.items() if item[1] >= min_freq),
        key=lambda item: (-item[1], item[0]),
    )
    vocab = Vocabulary(
        tokens=tuple(token for token, _ in ranked[:size]),
        min_freq=min_freq,
        corpus_hash=digest.hexdigest(),
        stem=stem,
    )
    logger.debug(
        "booleanize.vocab",
        extra={"distinct_tokens": len(counts), "vocab_size": len(vocab), "min_freq": min_freq},
    )
    return vocab


def text_to_bow(tokens: Iterable[str], vocab: Vocabulary) -> BooleanSample:
    """Presence vector: bit v is set iff vocabulary token v occurs at least once."""

    bits = np.zeros(len(vocab), dtype=np.uint8)
    positions = [vocab.index[token] for token in tokens if token in vocab.index]
    bits[positions] = 1
    return BooleanSample(bits)


def texts_to_matrix(texts: Iterable[str], vocab: Vocabulary) -> np.ndarray:
    """Bag-of-words matrix (m, V) using the vocabulary's own stemming setting."""

    rows = [text_to_bow(tokenize(text, stem=vocab.stem), vocab).bits for text in texts]
    if not rows:
        return np.zeros((0, len(vocab)), dtype=np.uint8)
    return np.stack(rows)
