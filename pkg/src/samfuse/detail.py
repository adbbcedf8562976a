"""Multi-scale high-frequency extraction and log-energy adaptive fusion.

Detail at scale m is the residual of a Gaussian blur with window 2m+1 and
sigma m times the base sigma; the accumulated detail field is the sum over
scales. The two detail fields are merged either by a pixel-wise maximum
rule or by log-energy weighting, depending on how different their total
log-energies are.
"""

from __future__ import annotations

import numpy as np

from .config import FusionConfig
from .imgcore import gaussian_blur
from .validation import as_gray, check_same_shape


def detail_layers(img, cfg: FusionConfig) -> np.ndarray:
    """Accumulated signed detail: sum over scales of (I - blur_m(I))."""
    arr = as_gray(img)
    acc = np.zeros_like(arr)
    for m in range(1, int(cfg.num_scales) + 1):
        window = 2 * m + 1
        acc += arr - gaussian_blur(arr, window, cfg.gauss_sigma * m)
    return acc


def log_energy(detail) -> float:
    """Total detail salience: sum of log(1 + d^2) over the field."""
    arr = np.asarray(detail, dtype=np.float64)
    return float(np.log1p(arr * arr).sum())


def max_rule_map(d1, d2) -> tuple[np.ndarray, np.ndarray]:
    """Binary selection maps by absolute-value maximum; ties go to source 1."""
    d1 = as_gray(d1, "d1")
    d2 = as_gray(d2, "d2")
    check_same_shape(d1, d2)
    hm1 = (np.abs(d1) >= np.abs(d2)).astype(np.float64)
    return hm1, 1.0 - hm1


def fuse_high(d1, d2, e1: float, e2: float, cfg: FusionConfig) -> np.ndarray:
    """Merge two detail fields, gated by the log-energy difference.

    When |E1 - E2| exceeds the effective threshold (the per-pixel
    coefficient times the pixel count) the fields differ enough for the
    maximum rule to pick focus boundaries cleanly; otherwise an
    energy-weighted average retains information from both. Zero total
    energy degenerates to equal weights.
    """
    d1 = as_gray(d1, "d1")
    d2 = as_gray(d2, "d2")
    check_same_shape(d1, d2)
    lam = cfg.log_energy_threshold * d1.size
    if abs(e1 - e2) > lam:
        hm1, hm2 = max_rule_map(d1, d2)
        return hm1 * d1 + hm2 * d2
    total = e1 + e2
    w1 = 0.5 if total == 0 else e1 / total
    return w1 * d1 + (1.0 - w1) * d2


def enhance(pf, fh) -> np.ndarray:
    """Enhanced pre-fusion: PF + FH clamped to [0, 1]."""
    pf = as_gray(pf, "pf")
    fh = as_gray(fh, "fh")
    check_same_shape(pf, fh)
    return np.clip(pf + fh, 0.0, 1.0)
