"""Type I / Type II automaton feedback and the clause-selection probability."""

from __future__ import annotations

import numpy as np

from .exceptions import InvariantViolation


def feedback_probability(v: int, T: int, y: int) -> float:
    """Probability ε/(2T) of giving a clause feedback, with v clamped to [−T, T]."""

    if T < 1:
        raise ValueError("T must be at least 1")
    clamped = max(-T, min(T, int(v)))
    error = T - clamped if y == 1 else T + clamped
    return error / (2 * T)


def _check_state(state: int, states_per_action: int) -> None:
    if not 1 <= state <= 2 * states_per_action:
        raise InvariantViolation(f"automaton state {state} outside [1, {2 * states_per_action}]")


def type_i_feedback(
    state: int,
    literal: int,
    clause_out: int,
    *,
    s: float,
    states_per_action: int,
    rng: np.random.Generator,
    boost: bool = False,
) -> int:
    """One Type I update of a single automaton; consumes exactly one uniform draw."""

    _check_state(state, states_per_action)
    u = rng.random()
    if clause_out and literal:
        if boost or u < (s - 1.0) / s:
            state += 1
    elif u < 1.0 / s:
        state -= 1
    return min(max(state, 1), 2 * states_per_action)


def type_ii_feedback(state: int, literal: int, clause_out: int, *, states_per_action: int) -> int:
    """Deterministic Type II update: firing clause, 0-literal, excluded → one step toward include."""

    _check_state(state, states_per_action)
    if clause_out and not literal and state <= states_per_action:
        state += 1
    return min(state, 2 * states_per_action)


def type_i_deltas(
    clause_outputs: np.ndarray,
    literals: np.ndarray,
    *,
    s: float,
    rng: np.random.Generator,
    boost: bool = False,
) -> np.ndarray:
    """Type I state increments (k, 2o) for k clauses, one uniform per automaton."""

    u = rng.random(literals.shape)
    fires = clause_outputs.astype(bool)[:, None] & literals.astype(bool)
    reward = fires if boost else fires & (u < (s - 1.0) / s)
    penalty = ~fires & (u < 1.0 / s)
    return reward.astype(np.int32) - penalty.astype(np.int32)


def type_ii_deltas(
    clause_outputs: np.ndarray,
    literals: np.ndarray,
    states: np.ndarray,
    states_per_action: int,
) -> np.ndarray:
    """Type II state increments (k, 2o); deterministic."""

    hits = clause_outputs.astype(bool)[:, None] & (literals == 0) & (states <= states_per_action)
    return hits.astype(np.int32)
