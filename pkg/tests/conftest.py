import numpy as np
import pytest

import samfuse as sf
from samfuse.bench import disk_mask, half_plane_mask


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def half_fixture():
    """512x512 complementary-blur pair, left half sharp in source_a."""
    gt = sf.random_scene(512, 512, seed=3)
    return sf.make_pair(gt, half_plane_mask(512, 512), 3.0)


@pytest.fixture(scope="session")
def disk_fixture():
    """512x512 pair with a 10 px radius focused disk in source_a."""
    gt = sf.random_scene(512, 512, seed=7)
    return sf.make_pair(gt, disk_mask(512, 512, 10.0), 3.0)


@pytest.fixture(scope="session")
def small_half_fixture():
    """Fast 128x128 variant for per-module tests."""
    gt = sf.random_scene(128, 128, seed=11)
    return sf.make_pair(gt, half_plane_mask(128, 128), 2.0)
