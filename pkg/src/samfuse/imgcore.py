"""Shared raster primitives: color conversion, separable Gaussian blur,
intensity histograms, connected-component labeling, and 8-bit image I/O.

Pixels are float64 in [0, 1] everywhere inside the pipeline; 8-bit files
are converted at the boundary. All convolutions use mirror-reflected
borders, which avoids dark halos at focus boundaries.
"""

from __future__ import annotations

import numpy as np
from PIL import Image
from scipy import ndimage

from .validation import (
    DimensionMismatchError,
    ParameterError,
    as_float_image,
    as_gray,
    check_binary,
    check_odd_window,
    check_positive,
)

# BT.601 luminance weights.
LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])

# scipy.ndimage border mode matching np.pad(mode="symmetric").
_BORDER = "reflect"


def to_gray(img) -> np.ndarray:
    """Luminance of a color image: 0.299 R + 0.587 G + 0.114 B, in [0, 1]."""
    arr = as_float_image(img)
    if arr.ndim == 2:
        return np.clip(arr, 0.0, 1.0)
    return np.clip(arr @ LUMA_WEIGHTS, 0.0, 1.0)


def gaussian_kernel(window: int, sigma: float) -> np.ndarray:
    """Normalized 1-D Gaussian truncated to ``window`` taps."""
    window = check_odd_window(window)
    check_positive(sigma, "sigma")
    half = window // 2
    x = np.arange(-half, half + 1, dtype=np.float64)
    k = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return k / k.sum()


def gaussian_blur(img, window: int, sigma: float) -> np.ndarray:
    """Separable Gaussian convolution with mirror-reflected borders.

    Works on (H, W) images and channel-last (H, W, C) stacks; a window of
    1 is the identity.
    """
    arr = as_float_image(img)
    kernel = gaussian_kernel(window, sigma)
    if kernel.size == 1:
        return arr.copy()
    out = ndimage.correlate1d(arr, kernel, axis=0, mode=_BORDER)
    return ndimage.correlate1d(out, kernel, axis=1, mode=_BORDER)


def quantize256(img) -> np.ndarray:
    """Map [0, 1] intensities to integer bins 0..255 via round-half-up."""
    arr = np.asarray(img, dtype=np.float64)
    bins = np.floor(arr * 255.0 + 0.5).astype(np.int64)
    return np.clip(bins, 0, 255)


def histogram256(img) -> np.ndarray:
    """256-bin intensity histogram; counts sum to the pixel count."""
    bins = quantize256(as_gray(img))
    return np.bincount(bins.ravel(), minlength=256)


def connected_components(mask, connectivity: int = 8) -> tuple[np.ndarray, np.ndarray]:
    """Label the 1-pixels of a binary mask.

    Returns (labels, areas) where labels is 0 for background and 1..n for
    regions, and areas[i] is the pixel count of region i+1.
    """
    arr = check_binary(mask)
    if connectivity == 4:
        structure = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]])
    elif connectivity == 8:
        structure = np.ones((3, 3))
    else:
        raise ParameterError(f"connectivity must be 4 or 8, got {connectivity}")
    labels, count = ndimage.label(arr, structure=structure)
    areas = np.bincount(labels.ravel(), minlength=count + 1)[1:]
    return labels, areas


# ---------------------------------------------------------------------------
# 8-bit I/O


def load_image(path) -> np.ndarray:
    """Read a PNG/JPEG file as float64 in [0, 1].

    Grayscale files come back as (H, W); everything else as (H, W, 3).
    """
    with Image.open(path) as im:
        if im.mode in ("L", "I;16", "I"):
            arr = np.asarray(im.convert("L"), dtype=np.float64)
            return arr / 255.0
        arr = np.asarray(im.convert("RGB"), dtype=np.float64)
        return arr / 255.0


def to_uint8(img) -> np.ndarray:
    return quantize256(img).astype(np.uint8)


def save_image(path, img) -> None:
    """Write a [0, 1] image as an 8-bit PNG/JPEG (mode from the extension)."""
    arr = as_float_image(img)
    Image.fromarray(to_uint8(arr)).save(path)


def save_decision_map(path, dm, rmp_levels: bool = False) -> None:
    """Export a decision map as 8-bit PNG.

    Trinary maps use the mapping {0 -> 0, 0.5 -> 128, 1 -> 255}. With
    ``rmp_levels`` the {0.5, 1, 2} encoding of the three-region map is
    written with the debug palette {0.5 -> 128, 1 -> 255, 2 -> 64}.
    """
    arr = np.asarray(dm, dtype=np.float64)
    out = np.zeros(arr.shape, dtype=np.uint8)
    if rmp_levels:
        out[arr == 0.5] = 128
        out[arr == 1.0] = 255
        out[arr == 2.0] = 64
    else:
        out[arr == 0.5] = 128
        out[arr == 1.0] = 255
    Image.fromarray(out).save(path)


def save_score_map(path, sm) -> None:
    """Export a [-1, 1] score map as 8-bit PNG via v -> (v+1)/2*255."""
    arr = np.asarray(sm, dtype=np.float64)
    scaled = np.clip((arr + 1.0) * 0.5, 0.0, 1.0)
    Image.fromarray(to_uint8(scaled)).save(path)


def require_pair(i1, i2) -> tuple[np.ndarray, np.ndarray]:
    """Validate a source pair: both float images sharing dimensions."""
    a = as_float_image(i1, "first source")
    b = as_float_image(i2, "second source")
    if a.shape[:2] != b.shape[:2]:
        raise DimensionMismatchError(
            f"sources must share dimensions, got {a.shape[:2]} and {b.shape[:2]}"
        )
    return a, b
