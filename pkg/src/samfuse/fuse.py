"""Pipeline orchestration: source pair in, fused image and decision maps out.

All decisions run on luminance; color re-enters only in the pre-fusion
(the luminance-derived weight applied per channel) and in the final
composition, which copies focused and defocused pixels verbatim from the
sources.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import detail, saliency, segment, ssimmap
from .config import FusionConfig
from .dtrf import RfParams, rf
from .imgcore import require_pair, to_gray
from .validation import ParameterError, as_gray, check_same_shape


@dataclass
class FusionResult:
    """Output bundle of one pipeline run.

    ``intermediates`` is populated only when requested, with the stage
    planes keyed as pf, epf, scm1, scm2, b1, b2, dm, dbm, bdm, tmp, omp,
    rmp.
    """

    fused: np.ndarray
    fmp: np.ndarray
    config: FusionConfig
    intermediates: dict = field(default_factory=dict)


def compose(i1, i2, fmp, pf) -> np.ndarray:
    """Final composition: copy source 1 where fmp is 1, source 2 where it
    is 0, and take the pre-fused value where uncertain. Copies are exact,
    with no arithmetic applied."""
    i1, i2 = require_pair(i1, i2)
    fmp = as_gray(fmp, "fmp")
    pf = np.asarray(pf, dtype=np.float64)
    check_same_shape(i1, i2, fmp, pf)
    if not np.isin(fmp, (0.0, 0.5, 1.0)).all():
        raise ParameterError("fmp must be trinary over {0, 0.5, 1}")
    if i1.ndim == 3 or i2.ndim == 3 or pf.ndim == 3:
        i1, i2, pf = _as_color(i1), _as_color(i2), _as_color(pf)
        sel = fmp[:, :, None]
    else:
        sel = fmp
    return np.where(sel == 1.0, i1, np.where(sel == 0.0, i2, pf))


def run_pipeline(i1, i2, cfg: FusionConfig | None = None, keep_intermediates: bool = False) -> FusionResult:
    """Fuse a pair of partially focused images of the same scene.

    Exactly two sources are supported; they must share dimensions. Inputs
    may be gray (H, W) or color (H, W, 3) in [0, 1]; a gray/color mix is
    allowed and decisions always run on luminance.
    """
    cfg = cfg or FusionConfig()
    i1, i2 = require_pair(i1, i2)
    g1 = to_gray(i1)
    g2 = to_gray(i2)

    color = i1.ndim == 3 or i2.ndim == 3
    if color:
        i1, i2 = _as_color(i1), _as_color(i2)

    # saliency-weighted pre-fusion; one scalar weight drives all channels
    wf = saliency.saliency_weight(saliency.vsm(g1), saliency.vsm(g2))
    pf_gray = saliency.prefuse(g1, g2, wf)
    pf = saliency.prefuse(i1, i2, wf) if color else pf_gray

    # detail enhancement
    d1 = detail.detail_layers(g1, cfg)
    d2 = detail.detail_layers(g2, cfg)
    fh = detail.fuse_high(d1, d2, detail.log_energy(d1), detail.log_energy(d2), cfg)
    epf = detail.enhance(pf_gray, fh)

    # per-source focus scores, regularized along each source's own edges
    scm1 = ssimmap.ssim_map(epf, g1, cfg.ssim_window)
    scm2 = ssimmap.ssim_map(epf, g2, cfg.ssim_window)
    params = RfParams(cfg.rf_sigma_s, cfg.rf_sigma_r, cfg.rf_iterations)
    b1 = rf(scm1, g1, params)
    b2 = rf(scm2, g2, params)

    # two-region and three-region strategies, then their agreement
    tmp = segment.two_region(b1, b2)
    omp = segment.consistency_verify(tmp, cfg)
    maps = segment.diff_maps(scm1, scm2, b1, b2, (g1 + g2) / 2.0, cfg)
    rmp = segment.three_region(maps, b1, b2, cfg.balance_beta)
    fmp = segment.final_map(omp, rmp)

    fused = compose(i1, i2, fmp, pf)
    result = FusionResult(fused=fused, fmp=fmp, config=cfg)
    if keep_intermediates:
        result.intermediates = {
            "pf": pf,
            "epf": epf,
            "scm1": scm1,
            "scm2": scm2,
            "b1": b1,
            "b2": b2,
            "dm": maps.dm,
            "dbm": maps.dbm,
            "bdm": maps.bdm,
            "tmp": tmp,
            "omp": omp,
            "rmp": rmp,
        }
    return result


def _as_color(img: np.ndarray) -> np.ndarray:
    if img.ndim == 3:
        return img
    return np.repeat(img[:, :, None], 3, axis=2)
