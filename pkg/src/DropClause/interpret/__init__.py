"""Interpretability reports: clause listings, literal frequency maps, pixel heatmaps."""

from .clauses import export_clauses, literal_names, patch_clauses, rank_by_weight, supporting_clauses
from .exceptions import GeometryMismatchError, InterpretError, VocabularyMismatchError
from .heatmap import heatmap, pixel_mask, render_heatmap
from .models import EMPTY_CLAUSE, ClauseEntry, ClauseReport, FeatureFrequency, Heatmap, RankedLiteral, render_literals
from .wordmap import annotate, word_frequency_map

__all__ = [
    "ClauseEntry",
    "ClauseReport",
    "EMPTY_CLAUSE",
    "FeatureFrequency",
    "GeometryMismatchError",
    "Heatmap",
    "InterpretError",
    "RankedLiteral",
    "VocabularyMismatchError",
    "annotate",
    "export_clauses",
    "heatmap",
    "literal_names",
    "patch_clauses",
    "pixel_mask",
    "rank_by_weight",
    "render_heatmap",
    "render_literals",
    "supporting_clauses",
    "word_frequency_map",
]
