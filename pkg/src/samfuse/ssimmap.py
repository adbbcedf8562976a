"""Per-pixel structural similarity between two images.

Standard SSIM with Gaussian weighting (sigma 1.5) and the usual stability
constants for a dynamic range of 1, kept as a full-resolution map rather
than collapsed to a scalar: the segmentation stages consume per-pixel
scores. Borders are mirror-reflected, matching every other convolution in
the package.
"""

from __future__ import annotations

import numpy as np

from .imgcore import gaussian_blur
from .validation import as_gray, check_same_shape

SSIM_SIGMA = 1.5
_C1 = (0.01 * 1.0) ** 2
_C2 = (0.03 * 1.0) ** 2


def ssim_map(ref, src, window: int = 11) -> np.ndarray:
    """Local SSIM of ``ref`` vs ``src``, one value per pixel in [-1, 1]."""
    x = as_gray(ref, "ref")
    y = as_gray(src, "src")
    check_same_shape(x, y)

    def w(img):
        return gaussian_blur(img, window, SSIM_SIGMA)

    mu_x = w(x)
    mu_y = w(y)
    # raw (unclamped) local moments keep ssim_map(X, X) exactly 1
    var_x = w(x * x) - mu_x * mu_x
    var_y = w(y * y) - mu_y * mu_y
    cov = w(x * y) - mu_x * mu_y

    num = (2.0 * mu_x * mu_y + _C1) * (2.0 * cov + _C2)
    den = (mu_x * mu_x + mu_y * mu_y + _C1) * (var_x + var_y + _C2)
    return num / den
