"""Histogram-contrast saliency and the pre-fusion weight."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from samfuse.imgcore import quantize256
from samfuse.saliency import prefuse, saliency_weight, vsm


def saliency_oracle(img):
    """Brute force: raw saliency of a pixel is the sum of absolute
    differences between its 8-bit level and every pixel's level, then the
    map is min-max normalized. Quadratic in pixel count on purpose."""
    levels = quantize256(img).astype(np.float64).ravel()
    raw = np.abs(levels[:, None] - levels[None, :]).sum(axis=1)
    lo, hi = raw.min(), raw.max()
    if hi == lo:
        return np.zeros(img.shape)
    return ((raw - lo) / (hi - lo)).reshape(img.shape)


class TestVsm:
    def test_matches_bruteforce(self, rng):
        for shape in ((6, 9), (12, 4)):
            img = rng.random(shape)
            assert np.allclose(vsm(img), saliency_oracle(img), atol=1e-9)

    def test_flat_image_is_zero(self):
        assert np.array_equal(vsm(np.full((5, 5), 0.7)), np.zeros((5, 5)))

    def test_range(self, rng):
        s = vsm(rng.random((16, 16)))
        assert s.min() >= 0.0 and s.max() <= 1.0
        assert s.max() == 1.0  # min-max normalization reaches both ends
        assert s.min() == 0.0

    def test_binary_image_extremes(self):
        # minority level differs from more pixels, so it is the salient one
        img = np.zeros((4, 4))
        img[0, 0] = 1.0
        s = vsm(img)
        assert s[0, 0] == 1.0
        assert s[1, 1] == 0.0

    @settings(max_examples=25, deadline=None)
    @given(hnp.arrays(np.float64, (5, 5), elements=st.floats(0, 1)))
    def test_equals_oracle_property(self, img):
        assert np.allclose(vsm(img), saliency_oracle(img), atol=1e-9)


class TestWeight:
    def test_equal_saliency_gives_half(self, rng):
        img = rng.random((8, 8))
        wf = saliency_weight(vsm(img), vsm(img))
        assert np.array_equal(wf, np.full((8, 8), 0.5))

    def test_bounds(self, rng):
        wf = saliency_weight(vsm(rng.random((8, 8))), vsm(rng.random((8, 8))))
        assert wf.min() >= 0.0 and wf.max() <= 1.0

    def test_swap_mirrors_around_half(self, rng):
        s1, s2 = vsm(rng.random((6, 6))), vsm(rng.random((6, 6)))
        assert np.allclose(saliency_weight(s1, s2) + saliency_weight(s2, s1), 1.0)


class TestPrefuse:
    def test_identical_sources_exact(self, rng):
        img = rng.random((7, 7))
        wf = np.full((7, 7), 0.5)
        assert np.array_equal(prefuse(img, img, wf), img)

    def test_selects_source_at_extremes(self, rng):
        a, b = rng.random((4, 4)), rng.random((4, 4))
        assert np.array_equal(prefuse(a, b, np.ones((4, 4))), a)
        assert np.array_equal(prefuse(a, b, np.zeros((4, 4))), b)

    def test_color_broadcast(self, rng):
        a, b = rng.random((4, 4, 3)), rng.random((4, 4, 3))
        wf = np.full((4, 4), 0.25)
        got = prefuse(a, b, wf)
        assert got.shape == (4, 4, 3)
        assert np.allclose(got, 0.25 * a + 0.75 * b)

    def test_convexity(self, rng):
        a, b = rng.random((5, 5)), rng.random((5, 5))
        wf = rng.random((5, 5))
        pf = prefuse(a, b, wf)
        assert (pf >= np.minimum(a, b) - 1e-12).all()
        assert (pf <= np.maximum(a, b) + 1e-12).all()
