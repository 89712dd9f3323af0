import numpy as np
import pytest

from evtok import EventStream, SensorGeometry, from_arrays


def random_stream(seed, n=2000, width=64, height=64, max_t=500_000) -> EventStream:
    """Uniform random events, sorted in time, duplicate timestamps likely."""
    rng = np.random.default_rng(seed)
    geo = SensorGeometry(width, height)
    t = np.sort(rng.integers(0, max_t, n))
    x = rng.integers(0, width, n)
    y = rng.integers(0, height, n)
    p = rng.integers(0, 2, n) * 2 - 1
    return from_arrays(x, y, t, p, geo)


def bursty_stream(seed, n=2000, width=64, height=64, mean_gap_us=50) -> EventStream:
    """Clustered arrivals: exponential gaps, activity biased to a few patches."""
    rng = np.random.default_rng(seed)
    geo = SensorGeometry(width, height)
    t = np.cumsum(rng.exponential(mean_gap_us, n)).astype(np.int64)
    hotspots = rng.integers(0, width // 16, size=(4, 2)) * 16
    pick = rng.integers(0, 4, n)
    x = np.clip(hotspots[pick, 0] + rng.integers(0, 16, n), 0, width - 1)
    y = np.clip(hotspots[pick, 1] + rng.integers(0, 16, n), 0, height - 1)
    p = rng.integers(0, 2, n) * 2 - 1
    return from_arrays(x, y, t, p, geo)


@pytest.fixture
def small_geometry():
    return SensorGeometry(64, 64)
