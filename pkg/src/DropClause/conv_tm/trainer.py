"""Convolutional training: the flat trainer applied to patch literal rows."""

from __future__ import annotations

from typing import Any, Hashable, Mapping, Optional, Sequence

import numpy as np

from DropClause.drop_clause.masks import DropMask
from DropClause.tm_core.models import BooleanDataset, ClauseBank, Hyperparams, MulticlassModel
from DropClause.tm_core.trainer import FitResult, fit, train_step

from .patches import PatchGeometry, PatchSet, patches_for


def conv_model(
    labels: Sequence[Hashable],
    geometry: PatchGeometry,
    hyperparams: Hyperparams,
    *,
    binary: bool = False,
    preprocessing: Optional[Mapping[str, Any]] = None,
) -> MulticlassModel:
    return MulticlassModel.initialise(
        labels,
        geometry.patch_width,
        hyperparams,
        binary=binary,
        geometry=geometry,
        preprocessing=preprocessing,
    )


def conv_train_step(
    bank: ClauseBank,
    image: Any,
    target_y: int,
    mask: Optional[DropMask],
    rng: np.random.Generator,
    hyperparams: Hyperparams,
    geometry: Optional[PatchGeometry] = None,
    **kwargs: Any,
) -> ClauseBank:
    """One training step on an image (or a prepared PatchSet)."""

    if not isinstance(image, PatchSet):
        if geometry is None:
            raise ValueError("geometry is required to decompose a raw image")
        image = patches_for(image, geometry)
    return train_step(bank, image, target_y, mask, rng, hyperparams, **kwargs)


def conv_fit(model: MulticlassModel, dataset: BooleanDataset, **kwargs: Any) -> FitResult:
    """Same epoch loop as :func:`DropClause.tm_core.fit` on a convolutional model."""

    if model.geometry is None:
        raise ValueError("conv_fit requires a model built with a patch geometry")
    return fit(model, dataset, **kwargs)
