"""Convolutional Tsetlin Machine: patches, OR-of-patches clauses, patch feedback."""

from .clauses import ClauseMatch, conv_clause_eval, select_feedback_patch
from .patches import PatchGeometry, PatchSet, extract_patches, patch_literals, patches_for, thermometer
from .trainer import conv_fit, conv_model, conv_train_step

__all__ = [
    "ClauseMatch",
    "PatchGeometry",
    "PatchSet",
    "conv_clause_eval",
    "conv_fit",
    "conv_model",
    "conv_train_step",
    "extract_patches",
    "patch_literals",
    "patches_for",
    "select_feedback_patch",
    "thermometer",
]
