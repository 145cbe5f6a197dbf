"""Custom exceptions for evaluation and robustness runs."""

from __future__ import annotations


class HarnessError(Exception):
    """Base exception for the evaluation harness."""


class CorruptionRangeError(HarnessError, ValueError):
    """Raised when a corruption magnitude is outside its documented range."""


class SynonymMapError(HarnessError, ValueError):
    """Raised when a synonym map file is malformed."""
