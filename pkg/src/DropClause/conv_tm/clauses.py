"""Clause evaluation over patches: a clause fires when any patch satisfies it."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from DropClause.tm_core.clauses import patch_from_uniform, patch_matches
from DropClause.tm_core.exceptions import DimensionError, InvariantViolation
from DropClause.tm_core.models import EvalMode

from .patches import PatchSet


@dataclass(frozen=True)
class ClauseMatch:
    output: int
    matches: np.ndarray

    def __bool__(self) -> bool:
        return bool(self.output)


def conv_clause_eval(
    ta_row: np.ndarray,
    patch_set: PatchSet,
    *,
    states_per_action: int,
    mode: EvalMode = EvalMode.INFER,
) -> ClauseMatch:
    """OR of the clause over every patch, plus the indices of the matching patches."""

    ta_row = np.asarray(ta_row)
    if ta_row.ndim != 1 or ta_row.size != 2 * patch_set.patches.shape[1]:
        raise DimensionError(
            f"state row has {ta_row.size} entries, patches provide {2 * patch_set.patches.shape[1]}"
        )
    matches = patch_matches(ta_row[None, :], states_per_action, patch_set.literals, mode)[0]
    hits = np.flatnonzero(matches)
    return ClauseMatch(output=int(hits.size > 0), matches=hits)


def select_feedback_patch(
    matches: np.ndarray,
    rng: np.random.Generator,
    *,
    clause_output: int = 1,
    patch_count: Optional[int] = None,
) -> int:
    """Pick the patch whose literals drive feedback.

    A firing clause picks uniformly among its matching patches. A silent clause
    has no match, so a uniformly random patch out of `patch_count` supplies the
    literal values for Type Ib.
    """

    matches = np.asarray(matches, dtype=np.int64)
    if clause_output:
        if matches.size == 0:
            raise InvariantViolation("a firing clause must match at least one patch")
        return patch_from_uniform(matches, True, rng.random(), int(matches.size))
    if patch_count is None or patch_count < 1:
        raise ValueError("patch_count is required when the clause does not fire")
    return patch_from_uniform(matches, False, rng.random(), patch_count)
