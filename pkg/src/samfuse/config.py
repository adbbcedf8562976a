"""Tunable parameters for the fusion pipeline.

Every knob the pipeline exposes lives in :class:`FusionConfig` so that a
single immutable object fully determines a run. The defaults are the
values the acceptance suite was frozen against.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass

from .validation import ParameterError


@dataclass(frozen=True)
class FusionConfig:
    """Parameter set for the multi-focus fusion pipeline.

    Attributes:
        num_scales: number of detail-extraction scales M; scale m uses a
            Gaussian window of 2m+1 pixels and sigma of gauss_sigma*m.
        gauss_sigma: base Gaussian sigma for the detail pyramid, in pixels.
        log_energy_threshold: per-pixel coefficient for the log-energy gate;
            the effective threshold is this value times the pixel count,
            since log-energy is an un-normalized sum over the image.
        balance_beta: balance parameter of the three-region rule, in (0, 1].
        ssim_window: odd window for the per-pixel structural similarity map.
        rf_sigma_s: spatial scale of the edge-aware recursive filter, pixels.
        rf_sigma_r: range scale of the recursive filter, intensity units.
        rf_iterations: number of horizontal+vertical recursive filter sweeps.
        consistency_window: odd window of the decision-map majority vote.
        consistency_passes: how many times the majority vote is applied.
        small_region_fraction: connected regions of a binary decision map
            smaller than this fraction of the pixel count are flipped
            before the majority vote.

    The defaults are calibrated on synthetic complementary-blur fixtures
    so that a focused disk of radius 10 px inside an otherwise defocused
    512x512 field is still detected. Raising rf_sigma_s, rf_sigma_r,
    consistency_window or small_region_fraction trades that sensitivity
    for smoother decision maps on large-region scenes.
    """

    num_scales: int = 4
    gauss_sigma: float = 1.0
    log_energy_threshold: float = 0.002
    balance_beta: float = 0.5
    ssim_window: int = 11
    rf_sigma_s: float = 2.0
    rf_sigma_r: float = 0.05
    rf_iterations: int = 3
    consistency_window: int = 5
    consistency_passes: int = 1
    small_region_fraction: float = 0.0005

    def __post_init__(self) -> None:
        if int(self.num_scales) < 1:
            raise ParameterError(f"num_scales must be >= 1, got {self.num_scales}")
        if not self.gauss_sigma > 0:
            raise ParameterError(f"gauss_sigma must be > 0, got {self.gauss_sigma}")
        if self.log_energy_threshold < 0:
            raise ParameterError(
                f"log_energy_threshold must be >= 0, got {self.log_energy_threshold}"
            )
        if not 0 < self.balance_beta <= 1:
            raise ParameterError(f"balance_beta must be in (0, 1], got {self.balance_beta}")
        for name in ("ssim_window", "consistency_window"):
            value = int(getattr(self, name))
            if value < 3 or value % 2 == 0:
                raise ParameterError(f"{name} must be odd and >= 3, got {value}")
        if not self.rf_sigma_s > 0 or not self.rf_sigma_r > 0:
            raise ParameterError("rf_sigma_s and rf_sigma_r must be > 0")
        if int(self.rf_iterations) < 1:
            raise ParameterError(f"rf_iterations must be >= 1, got {self.rf_iterations}")
        if int(self.consistency_passes) < 0:
            raise ParameterError(
                f"consistency_passes must be >= 0, got {self.consistency_passes}"
            )
        if not 0 <= self.small_region_fraction < 1:
            raise ParameterError(
                f"small_region_fraction must be in [0, 1), got {self.small_region_fraction}"
            )

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "FusionConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ParameterError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


def config_hash(cfg: FusionConfig) -> str:
    """Stable 16-hex-digit digest of a config, for run manifests."""
    payload = json.dumps(cfg.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]
