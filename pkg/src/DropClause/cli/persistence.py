"""Model container: ``TMDC`` magic, u16 version, length-prefixed JSON header, raw arrays.

Layout (little-endian):

    4s  magic "TMDC"
    u16 format version
    u32 header length
    ... canonical JSON header (sorted keys)
    per clause bank: n × u32 weights, then n × 2o states as u16 or u32
"""

from __future__ import annotations

import json
import logging
import struct
from pathlib import Path
from typing import Any, Dict, List

import numpy as np

from DropClause.conv_tm.patches import PatchGeometry
from DropClause.tm_core.exceptions import TsetlinMachineError
from DropClause.tm_core.models import ClauseBank, Hyperparams, MulticlassModel, TAStateMatrix, state_dtype

logger = logging.getLogger(__name__)

MODEL_MAGIC = b"TMDC"
FORMAT_VERSION = 1
_PREFIX = struct.Struct("<4sHI")


class ModelFormatError(Exception):
    """Raised when a model file is malformed, truncated, or out of bounds."""


def _plain(value: Any) -> Any:
    return value.item() if hasattr(value, "item") else value


def encode_model(model: MulticlassModel) -> bytes:
    model.validate()
    state_width = state_dtype(model.hyperparams.states).itemsize
    n_clauses, n_literals = model.banks[0].matrix.states.shape
    header = {
        "hyperparams": model.hyperparams.to_dict(),
        "labels": [_plain(label) for label in model.labels],
        "binary": model.binary,
        "geometry": model.geometry.to_dict() if model.geometry is not None else None,
        "preprocessing": model.preprocessing,
        "state_width": state_width,
        "n_banks": len(model.banks),
        "n_clauses": int(n_clauses),
        "n_literals": int(n_literals),
    }
    encoded = json.dumps(header, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")
    state_format = f"<u{state_width}"
    parts: List[bytes] = [_PREFIX.pack(MODEL_MAGIC, FORMAT_VERSION, len(encoded)), encoded]
    for bank in model.banks:
        parts.append(bank.weights.astype("<u4").tobytes())
        parts.append(bank.matrix.states.astype(state_format).tobytes())
    return b"".join(parts)


def save_model(model: MulticlassModel, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_model(model))
    logger.info("model.saved", extra={"path": str(path), "fingerprint": model.fingerprint()})
    return path


def _read_header(blob: bytes) -> Dict[str, Any]:
    if len(blob) < _PREFIX.size:
        raise ModelFormatError("file too short for a model header")
    magic, version, header_length = _PREFIX.unpack_from(blob)
    if magic != MODEL_MAGIC:
        raise ModelFormatError(f"bad magic {magic!r}; not a model file")
    if version != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported format version {version} (expected {FORMAT_VERSION})")
    end = _PREFIX.size + header_length
    if len(blob) < end:
        raise ModelFormatError("truncated model header")
    try:
        header = json.loads(blob[_PREFIX.size : end].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ModelFormatError("unreadable model header") from exc
    header["_body_offset"] = end
    return header


def decode_model(blob: bytes) -> MulticlassModel:
    header = _read_header(blob)
    try:
        hyperparams = Hyperparams.from_dict(header["hyperparams"])
        n_banks = int(header["n_banks"])
        n_clauses = int(header["n_clauses"])
        n_literals = int(header["n_literals"])
        state_width = int(header["state_width"])
        geometry = PatchGeometry.from_dict(header["geometry"]) if header.get("geometry") else None
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"invalid model header: {exc}") from exc
    if state_width not in (2, 4) or state_width != state_dtype(hyperparams.states).itemsize:
        raise ModelFormatError(f"state width {state_width} does not match N={hyperparams.states}")

    offset = header["_body_offset"]
    bank_bytes = 4 * n_clauses + state_width * n_clauses * n_literals
    expected = offset + n_banks * bank_bytes
    if len(blob) < expected:
        raise ModelFormatError(f"truncated model body ({len(blob)} of {expected} bytes)")
    if len(blob) > expected:
        raise ModelFormatError(f"{len(blob) - expected} unexpected trailing bytes")

    native = state_dtype(hyperparams.states)
    banks: List[ClauseBank] = []
    for _ in range(n_banks):
        weights = np.frombuffer(blob, dtype="<u4", count=n_clauses, offset=offset).astype(np.uint32)
        offset += 4 * n_clauses
        states = np.frombuffer(
            blob, dtype=f"<u{state_width}", count=n_clauses * n_literals, offset=offset
        ).astype(native)
        offset += state_width * n_clauses * n_literals
        banks.append(
            ClauseBank(
                matrix=TAStateMatrix(
                    states=states.reshape(n_clauses, n_literals),
                    states_per_action=hyperparams.states,
                ),
                weights=weights,
            )
        )
    model = MulticlassModel(
        labels=tuple(header["labels"]),
        banks=banks,
        hyperparams=hyperparams,
        binary=bool(header.get("binary", False)),
        geometry=geometry,
        preprocessing=dict(header.get("preprocessing") or {}),
    )
    try:
        model.validate()
    except (TsetlinMachineError, ValueError) as exc:
        raise ModelFormatError(f"model failed validation: {exc}") from exc
    return model


def load_model(path: Path) -> MulticlassModel:
    """Load and bounds-check a model; nothing is returned unless every check passes."""

    path = Path(path)
    model = decode_model(path.read_bytes())
    logger.info("model.loaded", extra={"path": str(path), "fingerprint": model.fingerprint()})
    return model
