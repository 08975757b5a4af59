import numpy as np
import pytest
from hypothesis import settings

from polymorse import Linkage, enumerate_cyclic

settings.register_profile("ci", max_examples=60, deadline=None)
settings.load_profile("ci")


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # compile (or load) the numba kernels once so per-test timings are honest
    from polymorse.spatial import find_critical_points

    enumerate_cyclic(Linkage((1, 1, 1, 1, 1)))
    find_critical_points(Linkage((3, 4, 5, 6.5)), trials=5, seed=0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
