"""Scikit-learn style front end for the fusion pipeline.

The fuser is a stateless transformer: ``fit`` only validates parameters,
``transform`` maps a sequence of source pairs to fused images. Parameter
names match :class:`~samfuse.config.FusionConfig` fields one to one, so
``get_params()`` doubles as the reproducibility snapshot recorded in run
manifests.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .config import FusionConfig
from .fuse import FusionResult, run_pipeline
from .validation import ParameterError


class MultiFocusFuser(BaseEstimator, TransformerMixin):
    """All-in-focus fusion of partially focused image pairs.

    Parameters mirror FusionConfig; see there for meanings. The estimator
    holds no fitted state, every transform is a pure function of the
    inputs and parameters.

    Examples
    --------
    >>> fuser = MultiFocusFuser(num_scales=4, balance_beta=0.5)
    >>> fused = fuser.fuse(img_a, img_b).fused          # doctest: +SKIP
    >>> batch = fuser.transform([(a1, b1), (a2, b2)])   # doctest: +SKIP
    """

    def __init__(
        self,
        num_scales: int = 4,
        gauss_sigma: float = 1.0,
        log_energy_threshold: float = 0.002,
        balance_beta: float = 0.5,
        ssim_window: int = 11,
        rf_sigma_s: float = 2.0,
        rf_sigma_r: float = 0.05,
        rf_iterations: int = 3,
        consistency_window: int = 5,
        consistency_passes: int = 1,
        small_region_fraction: float = 0.0005,
    ):
        self.num_scales = num_scales
        self.gauss_sigma = gauss_sigma
        self.log_energy_threshold = log_energy_threshold
        self.balance_beta = balance_beta
        self.ssim_window = ssim_window
        self.rf_sigma_s = rf_sigma_s
        self.rf_sigma_r = rf_sigma_r
        self.rf_iterations = rf_iterations
        self.consistency_window = consistency_window
        self.consistency_passes = consistency_passes
        self.small_region_fraction = small_region_fraction

    def config(self) -> FusionConfig:
        """Validated FusionConfig snapshot of the current parameters."""
        return FusionConfig(**self.get_params())

    def fit(self, X=None, y=None) -> "MultiFocusFuser":
        """No-op apart from parameter validation; returns self."""
        self.config()
        return self

    def fuse(self, image_a, image_b, keep_intermediates: bool = False) -> FusionResult:
        """Run the full pipeline on one pair."""
        return run_pipeline(image_a, image_b, self.config(), keep_intermediates)

    def transform(self, X) -> list[np.ndarray]:
        """Fuse a sequence of (image_a, image_b) pairs."""
        cfg = self.config()
        out = []
        for pair in X:
            if len(pair) != 2:
                raise ParameterError(f"each sample must be a pair of images, got {len(pair)}")
            out.append(run_pipeline(pair[0], pair[1], cfg).fused)
        return out
