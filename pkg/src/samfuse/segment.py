"""Decision-map construction: two-region segmentation with consistency
verification, the three-region rule, and the merged final map.

Map encodings, all float arrays with exact level values:
  TMP, OMP  binary {0, 1}, 1 = first source wins
  RMP       {1, 2, 0.5} = focused / defocused / uncertain for source 1
  FMP       {1, 0, 0.5} = copy source 1 / copy source 2 / blend
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .config import FusionConfig
from .dtrf import RfParams, rf
from .imgcore import connected_components
from .validation import ParameterError, as_gray, check_binary, check_same_shape


@dataclass(frozen=True)
class DiffMaps:
    """Score-difference fields feeding the three-region rule."""

    dm: np.ndarray
    dbm: np.ndarray
    bdm: np.ndarray


def two_region(b1, b2) -> np.ndarray:
    """Binary argmax of the filtered score maps; ties favor source 1."""
    b1 = as_gray(b1, "b1")
    b2 = as_gray(b2, "b2")
    check_same_shape(b1, b2)
    return (b1 >= b2).astype(np.float64)


def _flip_small_regions(tmp: np.ndarray, min_area: float) -> np.ndarray:
    out = tmp.copy()
    for polarity in (1.0, 0.0):
        mask = (out == polarity).astype(np.float64)
        labels, areas = connected_components(mask, connectivity=8)
        small = np.flatnonzero(areas < min_area) + 1
        if small.size:
            out[np.isin(labels, small)] = 1.0 - polarity
    return out


def _majority_vote(tmp: np.ndarray, window: int) -> np.ndarray:
    # box sums of 0/1 values are exact integers in float64
    ones = np.ones(window, dtype=np.float64)
    votes = ndimage.correlate1d(tmp, ones, axis=0, mode="reflect")
    votes = ndimage.correlate1d(votes, ones, axis=1, mode="reflect")
    return (2.0 * votes > window * window).astype(np.float64)


def consistency_verify(tmp, cfg: FusionConfig) -> np.ndarray:
    """Clean a binary decision map by neighborhood coherence.

    Connected regions (8-connectivity, either polarity) smaller than
    small_region_fraction of the pixel count are flipped, then a sliding
    majority vote of consistency_window pixels runs consistency_passes
    times. The window size is odd, so votes cannot tie. Each vote is
    followed by another small-region flip, because a dense vote can mint
    new speckle; the output therefore never contains a region below the
    area threshold.
    """
    tmp = check_binary(tmp, "tmp")
    min_area = cfg.small_region_fraction * tmp.size
    out = _flip_small_regions(tmp, min_area)
    for _ in range(int(cfg.consistency_passes)):
        out = _majority_vote(out, int(cfg.consistency_window))
        out = _flip_small_regions(out, min_area)
    return out


def diff_maps(scm1, scm2, b1, b2, guide_avg, cfg: FusionConfig) -> DiffMaps:
    """Raw, blurred, and post-filter score-difference maps.

    DM is the absolute gap between the score maps, DBM its edge-aware
    blur (guided by the average of the two sources), and BDM the gap
    between the already-filtered maps. Deep inside a focused or defocused
    region the two paths agree (BDM approaches DBM); in transition zones
    filtering before differencing cancels mass and BDM drops below DBM.
    """
    scm1 = as_gray(scm1, "scm1")
    scm2 = as_gray(scm2, "scm2")
    check_same_shape(scm1, scm2, b1, b2, guide_avg)
    dm = np.abs(scm1 - scm2)
    params = RfParams(cfg.rf_sigma_s, cfg.rf_sigma_r, cfg.rf_iterations)
    dbm = rf(dm, guide_avg, params)
    bdm = np.abs(as_gray(b1, "b1") - as_gray(b2, "b2"))
    return DiffMaps(dm=dm, dbm=dbm, bdm=bdm)


def three_region(maps: DiffMaps, b1, b2, beta: float) -> np.ndarray:
    """Trinary labeling: focused (1) / defocused (2) / uncertain (0.5).

    A pixel is decisive when BDM exceeds beta * DBM; the strict inequality
    classifies the all-zero difference case as uncertain, so identical
    sources fall through to the blended output.
    """
    if not 0 < beta <= 1:
        raise ParameterError(f"beta must be in (0, 1], got {beta}")
    b1 = as_gray(b1, "b1")
    b2 = as_gray(b2, "b2")
    check_same_shape(maps.bdm, maps.dbm, b1, b2)
    decisive = maps.bdm > beta * maps.dbm
    rmp = np.full(b1.shape, 0.5)
    rmp[decisive & (b1 > b2)] = 1.0
    rmp[decisive & (b1 <= b2)] = 2.0
    return rmp


def final_map(omp, rmp) -> np.ndarray:
    """Merge the two strategies: agreement labels a pixel focused (1) or
    defocused (0); any disagreement leaves it uncertain (0.5)."""
    omp = check_binary(omp, "omp")
    rmp = as_gray(rmp, "rmp")
    check_same_shape(omp, rmp)
    fmp = np.full(omp.shape, 0.5)
    fmp[(omp == 1.0) & (rmp == 1.0)] = 1.0
    fmp[(omp == 0.0) & (rmp == 2.0)] = 0.0
    return fmp
