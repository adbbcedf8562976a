"""Synthetic multi-focus fixtures with ground truth, and decision-map
scoring against that ground truth.

A fixture starts from an all-in-focus image and a binary focus mask: the
first source keeps the masked region sharp and shows the Gaussian-blurred
image elsewhere, the second source is complementary. Blur is applied to
the whole image before masking, so defocused areas near the boundary
carry realistic bleed from the sharp side.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import ndimage

from .imgcore import gaussian_blur, load_image, save_image
from .validation import ParameterError, check_binary, check_positive, check_same_shape


@dataclass
class Fixture:
    ground_truth: np.ndarray
    source_a: np.ndarray
    source_b: np.ndarray
    true_map: np.ndarray  # 1 = sharp in source_a
    blur_sigma: float
    seed: int = 0


def blur_window(sigma: float) -> int:
    """Odd window covering three sigmas on each side."""
    return 2 * math.ceil(3.0 * sigma) + 1


def make_pair(gt, mask, sigma: float, seed: int = 0) -> Fixture:
    """Build a complementary-focus pair from an all-in-focus image."""
    gt = np.asarray(gt, dtype=np.float64)
    mask = check_binary(mask)
    check_same_shape(gt, mask, names="ground truth and mask")
    check_positive(sigma, "sigma")
    blurred = gaussian_blur(gt, blur_window(sigma), sigma)
    sel = mask[:, :, None] if gt.ndim == 3 else mask
    source_a = np.where(sel == 1.0, gt, blurred)
    source_b = np.where(sel == 1.0, blurred, gt)
    return Fixture(gt, source_a, source_b, mask, float(sigma), int(seed))


def half_plane_mask(height: int, width: int) -> np.ndarray:
    """Left half sharp in source_a."""
    mask = np.zeros((height, width))
    mask[:, : width // 2] = 1.0
    return mask


def disk_mask(height: int, width: int, radius: float, center=None) -> np.ndarray:
    if center is None:
        center = (height / 2.0, width / 2.0)
    yy, xx = np.mgrid[0:height, 0:width]
    dist2 = (yy - center[0]) ** 2 + (xx - center[1]) ** 2
    return (dist2 <= radius * radius).astype(np.float64)


def random_scene(height: int, width: int, seed: int, channels: int = 3) -> np.ndarray:
    """Reproducible textured test image: smooth gradients, blurred noise
    octaves, and a few hard-edged shapes, in [0, 1]."""
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    yy /= max(height - 1, 1)
    xx /= max(width - 1, 1)

    planes = []
    for _ in range(channels):
        plane = rng.uniform(0.2, 0.8) + rng.uniform(-0.3, 0.3) * xx + rng.uniform(-0.3, 0.3) * yy
        for sigma, amp in ((1.0, 0.20), (3.0, 0.15), (8.0, 0.10)):
            noise = rng.standard_normal((height, width))
            plane = plane + amp * gaussian_blur(noise, blur_window(sigma), sigma)
        planes.append(plane)
    img = np.stack(planes, axis=2)

    for _ in range(6):
        cy, cx = rng.uniform(0, height), rng.uniform(0, width)
        r = rng.uniform(0.04, 0.15) * min(height, width)
        shape = disk_mask(height, width, r, (cy, cx))
        color = rng.uniform(0.1, 0.9, size=channels)
        img = np.where(shape[:, :, None] == 1.0, 0.35 * img + 0.65 * color, img)

    lo, hi = img.min(), img.max()
    img = 0.02 + 0.96 * (img - lo) / (hi - lo)
    return img if channels > 1 else img[:, :, 0]


def boundary_distance(truth) -> np.ndarray:
    """Per-pixel distance to the nearest pixel of the opposite label."""
    truth = check_binary(truth, "truth")
    if truth.min() == truth.max():
        return np.full(truth.shape, np.inf)
    d_in = ndimage.distance_transform_edt(truth)
    d_out = ndimage.distance_transform_edt(1.0 - truth)
    return np.where(truth == 1.0, d_in, d_out)


def map_accuracy(fmp, truth, band: float) -> float:
    """Fraction of correctly labeled pixels farther than ``band`` from the
    truth boundary. Uncertain pixels count as errors there."""
    fmp = np.asarray(fmp, dtype=np.float64)
    truth = check_binary(truth, "truth")
    check_same_shape(fmp, truth)
    outside = boundary_distance(truth) > band
    if not outside.any():
        raise ParameterError("band leaves no pixels to evaluate")
    correct = ((fmp == 1.0) & (truth == 1.0)) | ((fmp == 0.0) & (truth == 0.0))
    return float(correct[outside].sum() / outside.sum())


def write_fixture(fixture: Fixture, outdir) -> Path:
    """Emit the directory layout gt.png, a.png, b.png, mask.png, meta.json."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    save_image(outdir / "gt.png", fixture.ground_truth)
    save_image(outdir / "a.png", fixture.source_a)
    save_image(outdir / "b.png", fixture.source_b)
    save_image(outdir / "mask.png", fixture.true_map)
    meta = {"sigma": fixture.blur_sigma, "seed": fixture.seed}
    (outdir / "meta.json").write_text(json.dumps(meta, indent=2) + "\n")
    return outdir


def load_fixture(path) -> Fixture:
    path = Path(path)
    meta = json.loads((path / "meta.json").read_text())
    mask = load_image(path / "mask.png")
    if mask.ndim == 3:
        mask = mask[:, :, 0]
    return Fixture(
        ground_truth=load_image(path / "gt.png"),
        source_a=load_image(path / "a.png"),
        source_b=load_image(path / "b.png"),
        true_map=(mask > 0.5).astype(np.float64),
        blur_sigma=float(meta["sigma"]),
        seed=int(meta.get("seed", 0)),
    )
