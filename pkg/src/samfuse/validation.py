"""Input validation helpers shared across the package.

All fusion operations work on plain numpy arrays: a gray image is a 2-D
float array with values nominally in [0, 1], a color image is an (H, W, 3)
float array. These helpers normalize inputs to float64 and enforce the
shape contracts once, at the API boundary, so the numeric kernels can
assume well-formed data.
"""

from __future__ import annotations

import numpy as np


class FusionError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(FusionError):
    """Operands do not share the required dimensions."""


class ParameterError(FusionError):
    """A configuration value or argument is outside its valid domain."""


def as_float_image(img, name: str = "image") -> np.ndarray:
    """Return ``img`` as a float64 array of shape (H, W) or (H, W, 3)."""
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim == 3 and arr.shape[2] == 1:
        arr = arr[:, :, 0]
    if arr.ndim not in (2, 3):
        raise ParameterError(f"{name} must be 2-D or 3-D, got shape {arr.shape}")
    if arr.ndim == 3 and arr.shape[2] != 3:
        raise ParameterError(f"{name} must have 3 channels, got {arr.shape[2]}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ParameterError(f"{name} must be at least 1x1, got shape {arr.shape}")
    return arr


def as_gray(img, name: str = "image") -> np.ndarray:
    arr = as_float_image(img, name)
    if arr.ndim != 2:
        raise ParameterError(f"{name} must be single-channel, got shape {arr.shape}")
    return arr


def check_same_shape(*imgs: np.ndarray, names: str = "images") -> None:
    shapes = {np.shape(im)[:2] for im in imgs}
    if len(shapes) > 1:
        raise DimensionMismatchError(f"{names} must share dimensions, got {sorted(shapes)}")


def check_odd_window(window: int, name: str = "window") -> int:
    window = int(window)
    if window < 1 or window % 2 == 0:
        raise ParameterError(f"{name} must be an odd integer >= 1, got {window}")
    return window


def check_positive(value: float, name: str) -> float:
    value = float(value)
    if not value > 0:
        raise ParameterError(f"{name} must be > 0, got {value}")
    return value


def check_binary(mask, name: str = "mask") -> np.ndarray:
    """Return ``mask`` as float64 after verifying every value is 0 or 1."""
    arr = np.asarray(mask, dtype=np.float64)
    if not np.isin(arr, (0.0, 1.0)).all():
        raise ParameterError(f"{name} must contain only 0 and 1")
    return arr
