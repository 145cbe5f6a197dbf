"""Tests for the binary model container."""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np
import pytest

from DropClause.booleanize.synthetic import pattern_xor_images, random_binary
from DropClause.cli.persistence import (
    FORMAT_VERSION,
    MODEL_MAGIC,
    ModelFormatError,
    decode_model,
    encode_model,
    load_model,
    save_model,
)
from DropClause.conv_tm import PatchGeometry, conv_model
from DropClause.tm_core import Hyperparams, MulticlassModel, fit, predict


def _trained_flat(seed: int = 0) -> MulticlassModel:
    generator = np.random.default_rng(seed)
    dataset = random_binary(300, 12, generator, classes=3)
    hp = Hyperparams(clauses=10, T=5, s=3.9, epochs=2, seed=seed, drop_clause=0.25)
    model = MulticlassModel.initialise(
        (0, 1, 2), 12, hp, preprocessing={"kind": "bits", "features": 12}
    )
    return fit(model, dataset).model


def test_round_trip_preserves_predictions(tmp_path: Path) -> None:
    model = _trained_flat()
    loaded = load_model(save_model(model, tmp_path / "model.tmdc"))
    samples = np.random.default_rng(9).integers(0, 2, size=(1000, 12), dtype=np.uint8)

    np.testing.assert_array_equal(predict(loaded, samples), predict(model, samples))
    assert loaded.fingerprint() == model.fingerprint()
    assert loaded.preprocessing == {"kind": "bits", "features": 12}
    assert loaded.hyperparams == model.hyperparams


def test_round_trip_convolutional_model(tmp_path: Path) -> None:
    geometry = PatchGeometry(4, 4, 1, 2)
    hp = Hyperparams(clauses=6, T=5, s=3.9, epochs=1)
    model = conv_model((0, 1), geometry, hp, binary=True)
    fit(model, pattern_xor_images(50, np.random.default_rng(0)))
    loaded = load_model(save_model(model, tmp_path / "conv.tmdc"))

    assert loaded.geometry == geometry
    assert loaded.binary is True
    for left, right in zip(loaded.banks, model.banks):
        np.testing.assert_array_equal(left.matrix.states, right.matrix.states)


def test_wide_state_range_uses_u32(tmp_path: Path) -> None:
    hp = Hyperparams(clauses=2, T=5, s=3.9, states=40_000)
    model = MulticlassModel.initialise((0, 1), 3, hp)
    model.banks[0].matrix.states[0, 0] = 80_000
    loaded = decode_model(encode_model(model))

    assert loaded.banks[0].matrix.states[0, 0] == 80_000


def test_same_seed_gives_identical_bytes() -> None:
    assert encode_model(_trained_flat(3)) == encode_model(_trained_flat(3))


def test_header_layout() -> None:
    blob = encode_model(_trained_flat())
    magic, version, length = struct.unpack_from("<4sHI", blob)
    header = json.loads(blob[10 : 10 + length])

    assert magic == MODEL_MAGIC
    assert version == FORMAT_VERSION
    assert header["labels"] == [0, 1, 2]
    assert header["state_width"] == 2


def test_truncated_file_is_refused() -> None:
    blob = encode_model(_trained_flat())

    for cut in (4, 20, len(blob) - 1):
        with pytest.raises(ModelFormatError):
            decode_model(blob[:cut])
    with pytest.raises(ModelFormatError):
        decode_model(blob + b"\x00")


def test_bad_magic_and_version() -> None:
    blob = encode_model(_trained_flat())

    with pytest.raises(ModelFormatError):
        decode_model(b"NOPE" + blob[4:])
    with pytest.raises(ModelFormatError):
        decode_model(blob[:4] + struct.pack("<H", FORMAT_VERSION + 1) + blob[6:])


def test_zero_state_is_refused() -> None:
    model = MulticlassModel.initialise((0, 1), 2, Hyperparams(clauses=2, T=5, s=3.9))
    blob = bytearray(encode_model(model))
    # the last two bytes hold the final u16 state of the last bank
    blob[-2:] = b"\x00\x00"

    with pytest.raises(ModelFormatError):
        decode_model(bytes(blob))


def test_zero_weight_is_refused() -> None:
    model = MulticlassModel.initialise((0, 1), 2, Hyperparams(clauses=2, T=5, s=3.9))
    blob = bytearray(encode_model(model))
    _, _, length = struct.unpack_from("<4sHI", blob)
    start = 10 + length
    blob[start : start + 4] = b"\x00\x00\x00\x00"

    with pytest.raises(ModelFormatError):
        decode_model(bytes(blob))
