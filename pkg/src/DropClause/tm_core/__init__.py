"""Flat Tsetlin Machine: automaton states, clause votes, feedback, and training.

Clause banks hold one n × 2o automaton state matrix per class. Training uses
Type I / Type II feedback with optional integer clause weights; per-epoch drop
masks from :mod:`DropClause.drop_clause` restrict which clauses vote and learn.
"""

from .clauses import (
    class_votes,
    clause_eval,
    classify,
    decide,
    encode_literals,
    patch_matches,
    predict,
    vote_matrix,
    vote_sum,
)
from .exceptions import (
    DimensionError,
    EmptyDatasetError,
    InvariantViolation,
    ModelNotInitialisedError,
    TsetlinMachineError,
    UnknownClassError,
)
from .feedback import feedback_probability, type_i_feedback, type_ii_feedback
from .models import (
    BooleanDataset,
    BooleanSample,
    ClauseBank,
    EpochMetrics,
    EvalMode,
    Hyperparams,
    MulticlassModel,
    TAStateMatrix,
    state_dtype,
)
from .rng import RandomStreams
from .trainer import (
    FeedbackEvents,
    FitResult,
    accuracy,
    fit,
    label_indices,
    train_on_literals,
    train_step,
)

__all__ = [
    "BooleanDataset",
    "BooleanSample",
    "ClauseBank",
    "DimensionError",
    "EmptyDatasetError",
    "EpochMetrics",
    "EvalMode",
    "FeedbackEvents",
    "FitResult",
    "Hyperparams",
    "InvariantViolation",
    "ModelNotInitialisedError",
    "MulticlassModel",
    "RandomStreams",
    "TAStateMatrix",
    "TsetlinMachineError",
    "UnknownClassError",
    "accuracy",
    "class_votes",
    "classify",
    "clause_eval",
    "decide",
    "encode_literals",
    "feedback_probability",
    "fit",
    "label_indices",
    "patch_matches",
    "predict",
    "state_dtype",
    "train_on_literals",
    "train_step",
    "type_i_feedback",
    "type_ii_feedback",
    "vote_matrix",
    "vote_sum",
]
