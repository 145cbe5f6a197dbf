"""Custom exceptions for interpretability reports."""

from __future__ import annotations


class InterpretError(Exception):
    """Base exception for clause listing, frequency map, and heatmap failures."""


class GeometryMismatchError(InterpretError, ValueError):
    """Raised when an image does not fit the model's patch geometry, or the model is flat."""


class VocabularyMismatchError(InterpretError, ValueError):
    """Raised when a text sample was booleanized with a different vocabulary."""
