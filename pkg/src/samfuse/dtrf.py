"""Edge-aware recursive filtering in the transformed domain.

The filter alternates 1-D recursive smoothing over rows and columns. In
each pass the feedback coefficient between neighboring pixels is a**d,
where a = exp(-sqrt(2)/sigma_H) and d is the warped distance between the
neighbors, d = 1 + (sigma_s/sigma_r) * |difference of the guide|. Large
guide edges make d huge, a**d vanish, and the recursion stop propagating,
which is what preserves focus boundaries. The per-iteration scale

    sigma_H_i = sigma_s * sqrt(3) * 2**(N - i) / sqrt(4**N - 1)

halves each sweep so that N iterations jointly realize the full spatial
scale. Each pass is a forward then a symmetric backward recursion:

    J[k] = S[k] + a**d[k]   * (J[k-1] - S[k])      (forward)
    J[k] = J[k] + a**d[k+1] * (J[k+1] - J[k])      (backward)

Every output sample is a convex combination of input samples, so the
result never leaves [min(signal), max(signal)] and constants are fixed
points for any guide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .validation import ParameterError, as_gray, check_same_shape


@dataclass(frozen=True)
class RfParams:
    sigma_s: float = 2.0
    sigma_r: float = 0.05
    iterations: int = 3

    def __post_init__(self) -> None:
        if not self.sigma_s > 0 or not self.sigma_r > 0:
            raise ParameterError("sigma_s and sigma_r must be > 0")
        if int(self.iterations) < 1:
            raise ParameterError(f"iterations must be >= 1, got {self.iterations}")


def _domain_distance(guide: np.ndarray, ratio: float, axis: int) -> np.ndarray:
    """Warped neighbor distance along ``axis``; index k holds the distance
    between samples k-1 and k (index 0 is unused and left at 1)."""
    d = np.ones_like(guide)
    steps = ratio * np.abs(np.diff(guide, axis=axis))
    if axis == 0:
        d[1:, :] += steps
    else:
        d[:, 1:] += steps
    return d


def _recursive_pass(J: np.ndarray, V: np.ndarray) -> None:
    """In-place forward+backward recursion along axis 0 of a C-contiguous
    array; V holds the per-sample feedback coefficients a**d."""
    length = J.shape[0]
    buf = np.empty_like(J[0])
    for k in range(1, length):
        np.subtract(J[k - 1], J[k], out=buf)
        np.multiply(buf, V[k], out=buf)
        np.add(J[k], buf, out=J[k])
    for k in range(length - 2, -1, -1):
        np.subtract(J[k + 1], J[k], out=buf)
        np.multiply(buf, V[k + 1], out=buf)
        np.add(J[k], buf, out=J[k])


def rf(signal, guide, params: RfParams | None = None) -> np.ndarray:
    """Edge-aware recursive filter of ``signal`` steered by ``guide``.

    The signal may live on any value range (score maps reach [-1, 1]);
    the recursion is range-agnostic. Guide and signal must share
    dimensions.
    """
    params = params or RfParams()
    s = as_gray(signal, "signal")
    g = as_gray(guide, "guide")
    check_same_shape(s, g, names="signal and guide")

    n = int(params.iterations)
    ratio = params.sigma_s / params.sigma_r
    d_h = _domain_distance(g, ratio, axis=1).T.copy()
    d_v = _domain_distance(g, ratio, axis=0)

    j = s.copy()
    scale = params.sigma_s * math.sqrt(3.0) / math.sqrt(4.0**n - 1.0)
    for i in range(1, n + 1):
        sigma_h = scale * 2.0 ** (n - i)
        ln_a = -math.sqrt(2.0) / sigma_h
        jt = j.T.copy()
        _recursive_pass(jt, np.exp(ln_a * d_h))
        j = jt.T.copy()
        _recursive_pass(j, np.exp(ln_a * d_v))
    return j
