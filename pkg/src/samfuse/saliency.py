"""Histogram-contrast visual saliency and the saliency-weighted pre-fusion.

The saliency of a pixel is the sum of absolute intensity differences to
every other pixel of the image. Because that depends on a pixel only
through its 8-bit intensity bin, the whole map reduces to a 256-entry
lookup table computed from the histogram.
"""

from __future__ import annotations

import numpy as np

from .imgcore import histogram256, quantize256
from .validation import as_gray, check_same_shape


def _contrast_table(hist: np.ndarray) -> np.ndarray:
    # table[i] = sum_j hist[j] * |i - j|, via prefix sums in O(256)
    hist = hist.astype(np.float64)
    idx = np.arange(256, dtype=np.float64)
    csum = np.cumsum(hist)
    psum = np.cumsum(hist * idx)
    total, total_w = csum[-1], psum[-1]
    # pixels at or below i contribute i*count - weight; those above, weight - i*count
    return idx * csum - psum + (total_w - psum) - idx * (total - csum)


def vsm(img) -> np.ndarray:
    """Global-contrast saliency map, min-max normalized to [0, 1].

    A constant image (or any image whose raw saliency is flat) yields the
    all-zero map.
    """
    arr = as_gray(img)
    table = _contrast_table(histogram256(arr))
    raw = table[quantize256(arr)]
    lo, hi = raw.min(), raw.max()
    if hi == lo:
        return np.zeros_like(arr)
    return (raw - lo) / (hi - lo)


def saliency_weight(s1, s2) -> np.ndarray:
    """Per-pixel weight of the first source: 0.5 + (S1 - S2) / 2."""
    s1 = as_gray(s1, "s1")
    s2 = as_gray(s2, "s2")
    check_same_shape(s1, s2, names="saliency maps")
    return 0.5 + (s1 - s2) / 2.0


def prefuse(i1, i2, wf) -> np.ndarray:
    """Convex combination of the sources: WF * I1 + (1 - WF) * I2.

    Accepts gray or channel-last color sources; a 2-D weight map is
    broadcast across channels.
    """
    i1 = np.asarray(i1, dtype=np.float64)
    i2 = np.asarray(i2, dtype=np.float64)
    wf = np.asarray(wf, dtype=np.float64)
    check_same_shape(i1, i2, wf, names="sources and weight map")
    if i1.ndim == 3 and wf.ndim == 2:
        wf = wf[:, :, None]
    return wf * i1 + (1.0 - wf) * i2
