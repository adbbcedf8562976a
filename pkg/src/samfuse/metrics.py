"""Fusion-quality metrics.

Q_MI is the normalized mutual-information score on the 0..2 scale: the
mutual information between each source and the fused image, each
normalized by the mean of the marginal entropies, summed over the two
sources. Entropies use 256 intensity bins and the natural log (the base
cancels in the ratio). A fused image identical to both sources scores 2.
"""

from __future__ import annotations

import numpy as np

from .imgcore import quantize256
from .validation import as_gray, check_same_shape


def joint_histogram(a, b) -> np.ndarray:
    """256x256 joint intensity counts; marginals match histogram256."""
    a = as_gray(a, "a")
    b = as_gray(b, "b")
    check_same_shape(a, b)
    idx = quantize256(a).ravel() * 256 + quantize256(b).ravel()
    return np.bincount(idx, minlength=256 * 256).reshape(256, 256)


def _entropy(p: np.ndarray) -> float:
    nz = p[p > 0]
    return float(-(nz * np.log(nz)).sum())


def entropy(img) -> float:
    """Shannon entropy of the 256-bin intensity distribution, in nats."""
    a = as_gray(img)
    counts = np.bincount(quantize256(a).ravel(), minlength=256)
    return _entropy(counts / counts.sum())


def mutual_information(a, b) -> float:
    """MI of the joint 256-bin intensity distribution, in nats."""
    joint = joint_histogram(a, b).astype(np.float64)
    p = joint / joint.sum()
    return _entropy(p.sum(axis=1)) + _entropy(p.sum(axis=0)) - _entropy(p.ravel())


def q_mi(a, b, f) -> float:
    """Normalized mutual-information fusion metric in [0, 2].

    Constant image pairs carry no information; their contribution is
    defined as zero rather than 0/0.
    """
    a = as_gray(a, "a")
    b = as_gray(b, "b")
    f = as_gray(f, "f")
    check_same_shape(a, b, f)

    def term(src):
        denom = entropy(src) + entropy(f)
        if denom == 0:
            return 0.0
        return mutual_information(src, f) / denom

    return 2.0 * (term(a) + term(b))


def psnr(reference, test) -> float:
    """Peak signal-to-noise ratio in dB for [0, 1] images (peak = 1).

    Identical images give +inf.
    """
    ref = np.asarray(reference, dtype=np.float64)
    tst = np.asarray(test, dtype=np.float64)
    check_same_shape(ref, tst)
    mse = float(np.mean((ref - tst) ** 2))
    if mse == 0:
        return float("inf")
    return -10.0 * np.log10(mse)
