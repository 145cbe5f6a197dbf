"""Evaluation harness: metrics, corruptions, text perturbation, robustness reports."""

from .corruption import corrupt_dataset, corrupt_image, load_corruption_set
from .exceptions import CorruptionRangeError, HarnessError, SynonymMapError
from .metrics import evaluate
from .models import CorruptionKind, CorruptionSpec, EvaluationResult, RobustnessRow
from .perturbation import load_synonym_map, perturb_text
from .reporting import REPORT_COLUMNS, RobustnessReport, robustness_report, robustness_trials

__all__ = [
    "CorruptionKind",
    "CorruptionRangeError",
    "CorruptionSpec",
    "EvaluationResult",
    "HarnessError",
    "REPORT_COLUMNS",
    "RobustnessReport",
    "RobustnessRow",
    "SynonymMapError",
    "corrupt_dataset",
    "corrupt_image",
    "evaluate",
    "load_corruption_set",
    "load_synonym_map",
    "perturb_text",
    "robustness_report",
    "robustness_trials",
]
