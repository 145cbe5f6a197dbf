"""Report records for clause listings, frequency maps, and heatmaps."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict, Hashable, List, Tuple

import numpy as np

EMPTY_CLAUSE = "TRUE (empty)"


def render_literals(literals: Tuple[str, ...]) -> str:
    return " ∧ ".join(literals) if literals else EMPTY_CLAUSE


@dataclass(frozen=True)
class ClauseEntry:
    clause: int
    weight: int
    polarity: int
    literals: Tuple[str, ...]

    def render(self) -> str:
        body = render_literals(self.literals)
        return f"{self.weight} · ({body})" if self.literals else f"{self.weight} · {body}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "clause": self.clause,
            "weight": self.weight,
            "polarity": self.polarity,
            "literals": list(self.literals),
        }


def _plain(label: Hashable) -> Any:
    return label.item() if hasattr(label, "item") else label


@dataclass(frozen=True)
class ClauseReport:
    """Top-k clauses of one class, highest weight first."""

    class_label: Hashable
    k: int
    entries: Tuple[ClauseEntry, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "class": _plain(self.class_label),
            "k": self.k,
            "entries": [entry.to_dict() for entry in self.entries],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2)

    def lines(self) -> List[str]:
        return [entry.render() for entry in self.entries]


@dataclass(frozen=True)
class RankedLiteral:
    literal: int
    name: str
    count: int
    negated: bool


@dataclass(frozen=True)
class FeatureFrequency:
    """Literal counts over the clauses a sample triggered for its predicted class."""

    predicted: Hashable
    triggered: Tuple[int, ...]
    counts: Dict[int, int] = field(default_factory=dict)
    ranked: Tuple[RankedLiteral, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "predicted": _plain(self.predicted),
            "triggered_clauses": list(self.triggered),
            "ranked": [
                {"literal": item.name, "count": item.count, "negated": item.negated}
                for item in self.ranked
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2)

    def render_text(self) -> str:
        if not self.ranked:
            return "(no clause triggered)"
        return "\n".join(
            f"{rank:>3}. {item.name} ({item.count})" for rank, item in enumerate(self.ranked, start=1)
        )


@dataclass(frozen=True)
class Heatmap:
    """Accumulated clause masks over an image, with provenance."""

    values: np.ndarray
    class_label: Hashable
    k: int
    model_hash: str
    clauses: Tuple[int, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "class": _plain(self.class_label),
            "k": self.k,
            "model_hash": self.model_hash,
            "clauses": list(self.clauses),
            "values": self.values.tolist(),
        }
