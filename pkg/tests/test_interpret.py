"""Tests for clause listings, frequency maps, and heatmaps."""

from __future__ import annotations

import json
from collections import Counter
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest
from conftest import bank_with_includes
from hypothesis import given, settings
from hypothesis import strategies as st

from DropClause.booleanize.models import Vocabulary
from DropClause.booleanize.synthetic import pattern_xor_images, random_binary
from DropClause.conv_tm import PatchGeometry, conv_model, patches_for
from DropClause.interpret import (
    EMPTY_CLAUSE,
    GeometryMismatchError,
    VocabularyMismatchError,
    annotate,
    export_clauses,
    heatmap,
    literal_names,
    patch_clauses,
    render_heatmap,
    word_frequency_map,
)
from DropClause.interpret.heatmap import clause_activation
from DropClause.tm_core import (
    BooleanDataset,
    BooleanSample,
    ClauseBank,
    Hyperparams,
    MulticlassModel,
    classify,
    clause_eval,
    fit,
)

# ---------------------------------------------------------------------------
# Clause listings
# ---------------------------------------------------------------------------


def _flat_model() -> MulticlassModel:
    model = MulticlassModel.initialise((0, 1), 2, Hyperparams(clauses=4, T=5, s=3.9))
    model.banks[1] = bank_with_includes([[0, 3], [], [1], [2]], features=2)
    model.banks[1].weights[:] = [7, 2, 5, 1]
    return model


def test_export_renders_weighted_conjunctions() -> None:
    report = export_clauses(_flat_model(), 1, 2)

    assert report.lines() == ["7 · (x1 ∧ ¬x2)", "5 · (x2)"]
    assert [entry.polarity for entry in report.entries] == [1, 1]


def test_export_renders_empty_clause() -> None:
    report = export_clauses(_flat_model(), 1, 4)

    assert any(EMPTY_CLAUSE in line for line in report.lines())
    assert "2 · TRUE (empty)" in report.lines()


def test_export_truncates_large_k_and_accepts_zero() -> None:
    model = _flat_model()

    assert len(export_clauses(model, 1, 50).entries) == 4
    empty = export_clauses(model, 1, 0)
    assert empty.entries == ()
    assert json.loads(empty.to_json()) == {"class": 1, "k": 0, "entries": []}


def test_export_rejects_unknown_class() -> None:
    with pytest.raises(ValueError):
        export_clauses(_flat_model(), 9, 3)


def test_text_literal_names() -> None:
    model = MulticlassModel.initialise(("neg", "pos"), 2, Hyperparams(clauses=2, T=5, s=3.9), binary=True)
    vocabulary = Vocabulary(tokens=("witti", "grace"))

    assert literal_names(model, vocabulary) == ["witti", "grace", "NOT witti", "NOT grace"]
    with pytest.raises(VocabularyMismatchError):
        literal_names(model, Vocabulary(tokens=("only",)))


# ---------------------------------------------------------------------------
# Frequency maps
# ---------------------------------------------------------------------------


def _text_model() -> tuple[MulticlassModel, Vocabulary]:
    vocabulary = Vocabulary(tokens=("witti", "grace", "bore"))
    model = MulticlassModel.initialise(
        ("neg", "pos"), 3, Hyperparams(clauses=2, T=5, s=3.9), binary=True
    )
    # clause 1 votes for "neg" and includes ¬witti and ¬grace
    model.banks[0] = bank_with_includes([[0], [3, 4]], features=3)
    return model, vocabulary


def test_untrained_model_triggers_nothing() -> None:
    model = MulticlassModel.initialise((0, 1), 3, Hyperparams(clauses=4, T=5, s=3.9))
    frequency = word_frequency_map(model, np.array([1, 0, 1]))

    assert frequency.ranked == ()
    assert frequency.render_text() == "(no clause triggered)"


def test_single_triggered_clause_counts_its_literals() -> None:
    model, vocabulary = _text_model()
    frequency = word_frequency_map(model, np.array([0, 0, 1]), vocabulary=vocabulary)

    assert frequency.predicted == "neg"
    assert frequency.triggered == (1,)
    assert [(item.name, item.count) for item in frequency.ranked] == [("NOT witti", 1), ("NOT grace", 1)]
    assert all(item.negated for item in frequency.ranked)


def test_top_m_limits_ranked_literals() -> None:
    model, vocabulary = _text_model()

    assert len(word_frequency_map(model, np.array([0, 0, 1]), 1, vocabulary=vocabulary).ranked) == 1


def test_annotate_marks_positive_literals() -> None:
    model, vocabulary = _text_model()
    frequency = word_frequency_map(model, np.array([1, 0, 0]), vocabulary=vocabulary)

    assert frequency.predicted == "pos"
    assert annotate(["witti", "film"], frequency) == "[witti] film"


def test_frequency_map_checks_width() -> None:
    model, vocabulary = _text_model()
    with pytest.raises(VocabularyMismatchError):
        word_frequency_map(model, np.array([0, 1]), vocabulary=vocabulary)


# ---------------------------------------------------------------------------
# Heatmaps and patch listings
# ---------------------------------------------------------------------------


def _corner_model() -> MulticlassModel:
    geometry = PatchGeometry(4, 4, 1, 2)
    model = conv_model((0, 1), geometry, Hyperparams(clauses=2, T=5, s=3.9))
    width = geometry.patch_width
    pixels = list(range(geometry.pixel_width))
    negated_codes = [width + geometry.pixel_width + bit for bit in range(geometry.row_bits + geometry.col_bits)]
    model.banks[1] = bank_with_includes([pixels + negated_codes, []], features=width)
    return model


def test_single_clause_heatmap_covers_its_patch() -> None:
    result = heatmap(_corner_model(), np.ones((4, 4), dtype=np.uint8), 1, 1)

    expected = np.zeros((4, 4), dtype=np.int64)
    expected[:2, :2] = 1
    np.testing.assert_array_equal(result.values, expected)
    assert result.clauses == (0,)


def test_heatmap_with_k_zero_is_blank() -> None:
    result = heatmap(_corner_model(), np.ones((4, 4), dtype=np.uint8), 1, 0)

    assert not result.values.any()


def test_heatmap_scales_by_weight_and_ignores_silent_clauses() -> None:
    model = _corner_model()
    model.banks[1].weights[0] = 3

    assert heatmap(model, np.ones((4, 4), dtype=np.uint8), 1, 1).values.max() == 3
    assert not heatmap(model, np.zeros((4, 4), dtype=np.uint8), 1, 1).values.any()


def test_heatmap_requires_convolutional_model() -> None:
    with pytest.raises(GeometryMismatchError):
        heatmap(_flat_model(), np.ones((2, 1), dtype=np.uint8), 1, 1)
    with pytest.raises(GeometryMismatchError):
        heatmap(_corner_model(), np.ones((5, 5), dtype=np.uint8), 1, 1)


def test_render_heatmap_writes_png(tmp_path: Path) -> None:
    image = np.ones((4, 4), dtype=np.uint8)
    result = heatmap(_corner_model(), image, 1, 1)
    path = render_heatmap(result, tmp_path / "plots" / "heatmap.png", image=image)

    assert path.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    assert result.to_dict()["values"][0][:2] == [1, 1]


def test_patch_listing() -> None:
    model = _corner_model()
    image = np.ones((4, 4), dtype=np.uint8)

    assert [entry.clause for entry in patch_clauses(model, image, 1, 0, 0, 5).entries] == [0]
    assert patch_clauses(model, image, 1, 1, 1, 5).entries == ()
    with pytest.raises(GeometryMismatchError):
        patch_clauses(model, image, 1, 3, 0, 5)


def test_convolutional_literal_names() -> None:
    names = literal_names(_corner_model())

    assert names[:4] == ["p[0,0]", "p[0,1]", "p[1,0]", "p[1,1]"]
    assert names[4:8] == ["row>0", "row>1", "col>0", "col>1"]
    assert names[12:14] == ["row≤0", "row≤1"]


# ---------------------------------------------------------------------------
# Invariants over trained models
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _trained_conv(seed: int) -> tuple[MulticlassModel, BooleanDataset]:
    dataset = pattern_xor_images(60, np.random.default_rng(seed))
    model = conv_model((0, 1), PatchGeometry(4, 4, 1, 2), Hyperparams(clauses=10, T=6, s=3.9, epochs=5, seed=seed))
    fit(model, dataset)
    return model, dataset


@lru_cache(maxsize=None)
def _trained_flat(seed: int, binary: bool) -> tuple[MulticlassModel, BooleanDataset]:
    dataset = random_binary(120, 8, np.random.default_rng(seed), classes=2 if binary else 3)
    labels = (0, 1) if binary else (0, 1, 2)
    model = MulticlassModel.initialise(
        labels, 8, Hyperparams(clauses=12, T=6, s=3.9, epochs=4, seed=seed), binary=binary
    )
    fit(model, dataset)
    return model, dataset


def _activation(model: MulticlassModel, image: np.ndarray, bank: ClauseBank, clause: int) -> np.ndarray:
    geometry = model.geometry
    patch_set = patches_for(image, geometry)
    origins = np.array([patch_set.origin(index) for index in range(len(patch_set))], dtype=np.int64)
    firing = np.array(
        [
            clause_eval(
                bank.matrix.states[clause],
                BooleanSample(patch_set.patches[index]),
                states_per_action=bank.matrix.states_per_action,
            )
            for index in range(len(patch_set))
        ],
        dtype=bool,
    )
    return clause_activation(bank, clause, firing, origins, geometry)


@settings(max_examples=100, deadline=None)
@given(
    seed=st.integers(0, 4),
    index=st.integers(0, 59),
    label=st.sampled_from([0, 1]),
    k=st.integers(0, 8),
)
def test_trained_heatmap_is_a_sum_of_bounded_clause_maps(seed: int, index: int, label: int, k: int) -> None:
    model, dataset = _trained_conv(seed)
    image = dataset.features[index]
    result = heatmap(model, image, label, k)
    bank = model.bank_for(label)

    expected = np.zeros_like(result.values)
    for clause in result.clauses:
        expected += _activation(model, image, bank, clause)
    np.testing.assert_array_equal(result.values, expected)
    if k:
        shorter = heatmap(model, image, label, k - 1)
        assert shorter.clauses == result.clauses[: len(shorter.clauses)]
    w_max = int(bank.weights.max())
    assert np.abs(result.values).max(initial=0) <= k * w_max
    assert np.abs(result.values).max(initial=0) <= sum(int(bank.weights[clause]) for clause in result.clauses)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 4), index=st.integers(0, 119), binary=st.booleans())
def test_frequency_map_counts_only_firing_supporting_clauses(seed: int, index: int, binary: bool) -> None:
    model, dataset = _trained_flat(seed, binary)
    bits = dataset.features[index]
    frequency = word_frequency_map(model, bits)

    assert frequency.predicted == classify(model, bits)
    bank = model.bank_for(frequency.predicted)
    wanted = -1 if binary and frequency.predicted == 0 else 1
    sample = BooleanSample(bits)
    fires = [
        clause
        for clause in np.flatnonzero(bank.polarity == wanted)
        if clause_eval(bank.matrix.states[clause], sample, states_per_action=bank.matrix.states_per_action)
    ]
    assert list(frequency.triggered) == [int(clause) for clause in fires]
    expected: Counter[int] = Counter()
    include = bank.matrix.states > bank.matrix.states_per_action
    for clause in frequency.triggered:
        expected.update(int(literal) for literal in np.flatnonzero(include[clause]))
    assert frequency.counts == dict(expected)
    assert sum(item.count for item in frequency.ranked) <= sum(expected.values())
