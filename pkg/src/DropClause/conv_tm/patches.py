"""Patch decomposition with thermometer-coded patch coordinates."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Mapping, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from DropClause.tm_core.exceptions import DimensionError


def _grid(size: int, window: int, step: int) -> np.ndarray:
    count = math.ceil((size - window) / step) + 1
    # The last origin is pulled back onto the border so every patch stays in bounds.
    return np.minimum(np.arange(count) * step, size - window)


@dataclass(frozen=True)
class PatchGeometry:
    """Image shape (d_x, d_y, d_z), window d_w and step q of a convolutional model."""

    height: int
    width: int
    channels: int
    window: int
    step: int = 1
    coordinates: bool = True

    def __post_init__(self) -> None:
        if min(self.height, self.width, self.channels) < 1:
            raise DimensionError("image dimensions must be positive")
        if self.window < 1:
            raise DimensionError("patch window must be at least 1")
        if self.window > min(self.height, self.width):
            raise DimensionError(
                f"patch window {self.window} exceeds image {self.height}×{self.width}"
            )
        if self.step < 1:
            raise DimensionError("patch step must be at least 1")

    @property
    def image_shape(self) -> Tuple[int, int, int]:
        return (self.height, self.width, self.channels)

    @property
    def row_origins(self) -> np.ndarray:
        return _grid(self.height, self.window, self.step)

    @property
    def col_origins(self) -> np.ndarray:
        return _grid(self.width, self.window, self.step)

    @property
    def grid_shape(self) -> Tuple[int, int]:
        return (len(self.row_origins), len(self.col_origins))

    @property
    def patch_count(self) -> int:
        rows, cols = self.grid_shape
        return rows * cols

    @property
    def pixel_width(self) -> int:
        return self.window * self.window * self.channels

    @property
    def row_bits(self) -> int:
        return self.grid_shape[0] - 1 if self.coordinates else 0

    @property
    def col_bits(self) -> int:
        return self.grid_shape[1] - 1 if self.coordinates else 0

    @property
    def patch_width(self) -> int:
        return self.pixel_width + self.row_bits + self.col_bits

    def describe_feature(self, index: int) -> Tuple[str, Tuple[int, ...]]:
        """Classify feature `index` as ("pixel", (dr, dc, ch)), ("row", (r,)) or ("col", (c,))."""

        if not 0 <= index < self.patch_width:
            raise DimensionError(f"feature {index} outside patch width {self.patch_width}")
        if index < self.pixel_width:
            dr, rest = divmod(index, self.window * self.channels)
            dc, channel = divmod(rest, self.channels)
            return "pixel", (dr, dc, channel)
        index -= self.pixel_width
        if index < self.row_bits:
            return "row", (index,)
        return "col", (index - self.row_bits,)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, payload: Mapping[str, Any]) -> "PatchGeometry":
        return cls(**dict(payload))

    @classmethod
    def for_image(
        cls, image_shape: Tuple[int, ...], window: int, step: int = 1, coordinates: bool = True
    ) -> "PatchGeometry":
        height, width = int(image_shape[0]), int(image_shape[1])
        channels = int(image_shape[2]) if len(image_shape) > 2 else 1
        return cls(height, width, channels, window, step, coordinates)


def thermometer(value: int, bits: int) -> np.ndarray:
    """Monotone code: bit i is 1 iff value > i."""

    return (value > np.arange(bits)).astype(np.uint8)


@dataclass(frozen=True)
class PatchSet:
    """The B patch vectors of one image with their grid coordinates."""

    patches: np.ndarray
    coords: np.ndarray
    geometry: PatchGeometry

    def __len__(self) -> int:
        return int(self.patches.shape[0])

    @property
    def literals(self) -> np.ndarray:
        return np.concatenate([self.patches, 1 - self.patches], axis=1)

    def origin(self, index: int) -> Tuple[int, int]:
        """Pixel origin (row, col) of patch `index`."""

        row, col = self.coords[index]
        return int(self.geometry.row_origins[row]), int(self.geometry.col_origins[col])


def _as_volume(image: np.ndarray, geometry: PatchGeometry) -> np.ndarray:
    image = np.asarray(image, dtype=np.uint8)
    if image.ndim == 1:
        if image.size != int(np.prod(geometry.image_shape)):
            raise DimensionError(
                f"flat input of {image.size} bits does not match image {geometry.image_shape}"
            )
        return image.reshape(geometry.image_shape)
    if image.ndim == 2:
        image = image[:, :, None]
    if image.shape != geometry.image_shape:
        raise DimensionError(f"image shape {image.shape} does not match {geometry.image_shape}")
    return image


def patches_for(image: np.ndarray, geometry: PatchGeometry) -> PatchSet:
    """Row-major patch enumeration; each vector is pixels, then row code, then column code."""

    volume = _as_volume(image, geometry)
    d_w = geometry.window
    windows = sliding_window_view(volume, (d_w, d_w, geometry.channels))[:, :, 0]
    rows, cols = geometry.row_origins, geometry.col_origins
    pixels = windows[np.ix_(rows, cols)].reshape(len(rows) * len(cols), geometry.pixel_width)
    grid_r, grid_c = np.meshgrid(np.arange(len(rows)), np.arange(len(cols)), indexing="ij")
    coords = np.stack([grid_r.ravel(), grid_c.ravel()], axis=1)
    parts = [pixels]
    if geometry.coordinates:
        parts.append((coords[:, :1] > np.arange(geometry.row_bits)).astype(np.uint8))
        parts.append((coords[:, 1:] > np.arange(geometry.col_bits)).astype(np.uint8))
    patches = np.concatenate(parts, axis=1).astype(np.uint8)
    return PatchSet(patches=patches, coords=coords, geometry=geometry)


def extract_patches(
    image: np.ndarray, window: int, step: int = 1, *, coordinates: bool = True
) -> PatchSet:
    """Decompose a binary d_x × d_y (× d_z) image into its d_w × d_w patches."""

    image = np.asarray(image, dtype=np.uint8)
    if image.ndim not in (2, 3):
        raise DimensionError(f"expected a 2D or 3D image, got shape {image.shape}")
    geometry = PatchGeometry.for_image(image.shape, window, step, coordinates)
    return patches_for(image, geometry)


def patch_literals(image: np.ndarray, geometry: PatchGeometry) -> np.ndarray:
    """Literal rows (B, 2·patch_width) for one image."""

    return patches_for(image, geometry).literals
