"""Pixel heatmaps from the top weighted clauses of a class."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Hashable, Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from DropClause.conv_tm.patches import PatchGeometry, patches_for  # noqa: E402
from DropClause.tm_core.clauses import patch_matches  # noqa: E402
from DropClause.tm_core.models import ClauseBank, EvalMode, MulticlassModel  # noqa: E402

from .clauses import rank_by_weight, supporting_clauses  # noqa: E402
from .exceptions import GeometryMismatchError  # noqa: E402
from .models import Heatmap  # noqa: E402

logger = logging.getLogger(__name__)


def pixel_mask(bank: ClauseBank, clause: int, geometry: PatchGeometry) -> np.ndarray:
    """d_w × d_w mask: +1 included pixel, −1 included negated pixel, 0 excluded; channels summed."""

    include = bank.matrix.states[clause] > bank.matrix.states_per_action
    width = geometry.patch_width
    pixels = geometry.pixel_width
    shape = (geometry.window, geometry.window, geometry.channels)
    signed = include[:pixels].astype(np.int64) - include[width : width + pixels].astype(np.int64)
    return signed.reshape(shape).sum(axis=2)


def clause_activation(
    bank: ClauseBank,
    clause: int,
    firing: np.ndarray,
    patch_set_origins: np.ndarray,
    geometry: PatchGeometry,
) -> np.ndarray:
    """Sum of the clause mask over its firing patches, clipped to [−1, 1], times its weight."""

    mask = pixel_mask(bank, clause, geometry)
    activation = np.zeros((geometry.height, geometry.width), dtype=np.int64)
    window = geometry.window
    for row, col in patch_set_origins[firing]:
        activation[row : row + window, col : col + window] += mask
    return np.clip(activation, -1, 1) * int(bank.weights[clause])


def heatmap(
    model: MulticlassModel,
    image: np.ndarray,
    class_label: Hashable,
    k: int,
) -> Heatmap:
    """Accumulate the top-k supporting clauses of a class over the patches where they fire."""

    geometry = model.geometry
    if geometry is None:
        raise GeometryMismatchError("heatmaps need a convolutional model")
    try:
        patch_set = patches_for(image, geometry)
    except ValueError as exc:
        raise GeometryMismatchError(str(exc)) from exc
    bank, candidates = supporting_clauses(model, class_label)
    chosen = rank_by_weight(bank, candidates, k)
    origins = np.array([patch_set.origin(index) for index in range(len(patch_set))], dtype=np.int64)
    firing = patch_matches(
        bank.matrix.states, bank.matrix.states_per_action, patch_set.literals, EvalMode.INFER, chosen
    )
    values = np.zeros((geometry.height, geometry.width), dtype=np.int64)
    for position, clause in enumerate(chosen):
        values += clause_activation(bank, int(clause), firing[position], origins, geometry)
    result = Heatmap(
        values=values,
        class_label=class_label,
        k=k,
        model_hash=model.fingerprint(),
        clauses=tuple(int(clause) for clause in chosen),
    )
    logger.debug(
        "interpret.heatmap",
        extra={"class": str(class_label), "k": k, "mass": int(np.abs(values).sum())},
    )
    return result


def render_heatmap(result: Heatmap, path: Path, *, image: Optional[np.ndarray] = None) -> Path:
    """Write a PNG with a diverging palette centred on zero; the image, if given, is shown alongside."""

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    limit = max(int(np.abs(result.values).max()), 1)
    panels = 2 if image is not None else 1
    figure, axes = plt.subplots(1, panels, figsize=(4 * panels, 4), squeeze=False)
    if image is not None:
        shown = np.asarray(image)
        axes[0, 0].imshow(shown[..., 0] if shown.ndim == 3 else shown, cmap="gray")
        axes[0, 0].set_title("input")
        axes[0, 0].axis("off")
    target = axes[0, panels - 1]
    plot = target.imshow(result.values, cmap="RdBu_r", vmin=-limit, vmax=limit)
    target.set_title(f"class {result.class_label}, top {result.k}")
    target.axis("off")
    figure.colorbar(plot, ax=target, fraction=0.046)
    figure.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(figure)
    return path
