"""Custom exceptions for booleanization and dataset loading."""

from __future__ import annotations


class BooleanizeError(Exception):
    """Base exception for binarization, vocabulary, and loader failures."""


class DatasetFormatError(BooleanizeError, ValueError):
    """Raised when an IDX, CSV, or cache file is malformed or truncated."""


class EmptyInputError(BooleanizeError, ValueError):
    """Raised when an image or corpus has nothing to booleanize."""
