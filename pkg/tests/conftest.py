import numpy as np
import pytest

from spectral_pw.models import CircleSpec, SphereSpec, build_circle_model, build_sphere_model
from spectral_pw.semigroups import build_group_cache


@pytest.fixture(scope="session")
def circle16():
    return build_circle_model(CircleSpec(16))


@pytest.fixture(scope="session")
def circle8():
    return build_circle_model(CircleSpec(8))


@pytest.fixture(scope="session")
def sphere4():
    return build_sphere_model(SphereSpec(4))


@pytest.fixture(scope="session")
def sphere2():
    return build_sphere_model(SphereSpec(2))


@pytest.fixture(scope="session")
def cache16(circle16):
    return build_group_cache(circle16)


@pytest.fixture(scope="session")
def cache8(circle8):
    return build_group_cache(circle8)


@pytest.fixture(scope="session")
def sphere4_cache(sphere4):
    return build_group_cache(sphere4)


def circle_index(model, n: int) -> int:
    """Storage index of Fourier mode ``n`` (order 0, -1, 1, -2, 2, ...)."""
    return 0 if n == 0 else 2 * abs(n) - (1 if n < 0 else 0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
