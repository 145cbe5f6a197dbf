"""Clause evaluation, vote aggregation, and classification."""

from __future__ import annotations

from typing import Any, Hashable, Optional

import numpy as np

from DropClause.drop_clause.masks import DropMask

from .exceptions import DimensionError, ModelNotInitialisedError
from .models import BooleanSample, ClauseBank, EvalMode, MulticlassModel

_BATCH = 1024


def patch_matches(
    states: np.ndarray,
    states_per_action: int,
    literal_rows: np.ndarray,
    mode: EvalMode = EvalMode.INFER,
    active: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Return a (k, B) matrix: clause k holds on literal row b.

    A clause holds when every included literal is 1. Clauses without included
    literals hold in training and never hold at inference. With `active`, only
    those clause rows are evaluated, in that order.
    """

    if states.shape[1] != literal_rows.shape[1]:
        raise DimensionError(
            f"clauses carry {states.shape[1]} literals but input provides {literal_rows.shape[1]}"
        )
    rows = np.arange(states.shape[0]) if active is None else np.asarray(active, dtype=np.int64)
    if literal_rows.shape[0] == 1:
        zeros = np.flatnonzero(literal_rows[0] == 0)
        violated = states[np.ix_(rows, zeros)] > states_per_action
        matches = ~violated.any(axis=1, keepdims=True)
    else:
        include = (states[rows] > states_per_action).astype(np.float32)
        violations = include @ (1 - literal_rows.astype(np.float32)).T
        matches = violations == 0
    if mode is EvalMode.INFER:
        matches &= (states[rows] > states_per_action).any(axis=1, keepdims=True)
    return matches


def clause_eval(
    ta_row: np.ndarray,
    sample: BooleanSample,
    *,
    states_per_action: int,
    mode: EvalMode = EvalMode.INFER,
) -> int:
    """Evaluate one clause: the AND over k of (include_k ⇒ literal_k)."""

    ta_row = np.asarray(ta_row)
    literals = sample.literals
    if ta_row.ndim != 1 or ta_row.size != literals.size:
        raise DimensionError(
            f"state row has {ta_row.size} entries but the sample provides {literals.size} literals"
        )
    return int(patch_matches(ta_row[None, :], states_per_action, literals[None, :], mode)[0, 0])


def literal_rows_of(sample: Any) -> np.ndarray:
    """Literal matrix (B, 2o) for a BooleanSample (B=1), a PatchSet, or a raw matrix."""

    if isinstance(sample, BooleanSample):
        return sample.literals[None, :]
    literals = getattr(sample, "literals", None)
    if literals is not None:
        return np.atleast_2d(literals)
    rows = np.asarray(sample, dtype=np.uint8)
    if rows.ndim != 2:
        raise DimensionError(f"expected a literal matrix, got shape {rows.shape}")
    return rows


def encode_literals(model: MulticlassModel, sample: Any) -> np.ndarray:
    """Literal rows a model sees for one raw input (bits, BooleanSample, or image)."""

    if isinstance(sample, BooleanSample):
        sample = sample.bits
    if model.geometry is not None:
        from DropClause.conv_tm.patches import patch_literals

        return patch_literals(np.asarray(sample, dtype=np.uint8), model.geometry)
    bits = np.asarray(sample, dtype=np.uint8).reshape(-1)
    if bits.size != model.n_features:
        raise DimensionError(f"model expects {model.n_features} features, got {bits.size}")
    return np.concatenate([bits, 1 - bits])[None, :]


def active_clauses(bank: ClauseBank, mask: Optional[DropMask]) -> np.ndarray:
    if mask is None:
        return np.arange(bank.n_clauses)
    if len(mask) != bank.n_clauses:
        raise DimensionError(f"mask has length {len(mask)} but the bank holds {bank.n_clauses} clauses")
    return mask.active_indices


def vote_rows(
    bank: ClauseBank,
    literal_rows: np.ndarray,
    active: np.ndarray,
    mode: EvalMode,
) -> tuple[int, np.ndarray]:
    """Vote sum over the `active` clauses plus their (k, B) match matrix."""

    matrix = bank.matrix
    matches = patch_matches(matrix.states, matrix.states_per_action, literal_rows, mode, active)
    outputs = matches.any(axis=1)
    return int(bank.signed_weights[active] @ outputs), matches


def vote_sum(
    bank: ClauseBank,
    sample: Any,
    mask: Optional[DropMask] = None,
    mode: EvalMode = EvalMode.INFER,
) -> int:
    """Weighted vote Σ π_j w_j C_j over positive minus negative clauses.

    Masked clauses are skipped outright, so they contribute exactly zero.
    """

    vote, _ = vote_rows(bank, literal_rows_of(sample), active_clauses(bank, mask), mode)
    return vote


def decide(model: MulticlassModel, votes: np.ndarray) -> np.ndarray:
    """Map per-bank vote sums (m, banks) to label indices."""

    votes = np.atleast_2d(votes)
    if model.binary:
        return np.where(votes[:, 0] >= 0, 1, 0)
    # argmax returns the first maximum, so ties go to the lowest class index.
    return np.argmax(votes, axis=1)


def class_votes(model: MulticlassModel, sample: Any) -> np.ndarray:
    """Vote sum of every clause bank for one input; inference never masks clauses."""

    if not model.is_initialised:
        raise ModelNotInitialisedError("model has no clause banks; call MulticlassModel.initialise")
    rows = encode_literals(model, sample)
    return np.array(
        [vote_rows(bank, rows, np.arange(bank.n_clauses), EvalMode.INFER)[0] for bank in model.banks],
        dtype=np.int64,
    )


def classify(model: MulticlassModel, sample: Any) -> Hashable:
    """Predict a label; binary models return label[1] iff 0 ≤ v."""

    index = int(decide(model, class_votes(model, sample))[0])
    return model.labels[index]


def vote_matrix(model: MulticlassModel, features: np.ndarray) -> np.ndarray:
    """Vote sums (m, banks) for a batch of inputs."""

    if not model.is_initialised:
        raise ModelNotInitialisedError("model has no clause banks; call MulticlassModel.initialise")
    features = np.asarray(features, dtype=np.uint8)
    if model.geometry is not None:
        return np.stack([class_votes(model, image) for image in features]) if len(features) else (
            np.zeros((0, len(model.banks)), dtype=np.int64)
        )
    flat = features.reshape(len(features), -1)
    if flat.shape[1] != model.n_features:
        raise DimensionError(f"model expects {model.n_features} features, got {flat.shape[1]}")
    votes = np.zeros((len(flat), len(model.banks)), dtype=np.int64)
    for start in range(0, len(flat), _BATCH):
        chunk = flat[start : start + _BATCH]
        zeros = np.concatenate([1 - chunk, chunk], axis=1).astype(np.float32)
        for column, bank in enumerate(model.banks):
            include = bank.include_actions()
            holds = (include.astype(np.float32) @ zeros.T) == 0
            holds &= include.any(axis=1)[:, None]
            votes[start : start + len(chunk), column] = bank.signed_weights @ holds
    return votes


def predict(model: MulticlassModel, features: np.ndarray) -> np.ndarray:
    """Label indices for a batch of inputs."""

    return decide(model, vote_matrix(model, features))


def patch_from_uniform(matching: np.ndarray, fired: bool, u: float, patch_count: int) -> int:
    """Feedback patch for one clause from a uniform draw u in [0, 1).

    A firing clause picks uniformly among its matching patches; a silent clause
    picks uniformly among all patches.
    """

    if fired:
        return int(matching[min(int(u * matching.size), matching.size - 1)])
    return min(int(u * patch_count), patch_count - 1)
