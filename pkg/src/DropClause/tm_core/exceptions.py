"""Custom exceptions for the Tsetlin Machine core."""

from __future__ import annotations


class TsetlinMachineError(Exception):
    """Base exception for clause bank and training failures."""


class DimensionError(TsetlinMachineError, ValueError):
    """Raised when a state row, literal vector, or mask has the wrong length."""


class InvariantViolation(TsetlinMachineError):
    """Raised when automaton states or clause weights leave their legal range."""


class ModelNotInitialisedError(TsetlinMachineError):
    """Raised when inference is requested from a model without clause banks."""


class UnknownClassError(TsetlinMachineError, ValueError):
    """Raised when a label is not part of the model's class table."""


class EmptyDatasetError(TsetlinMachineError, ValueError):
    """Raised when training is requested on a dataset without samples."""
