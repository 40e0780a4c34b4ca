import numpy as np
import pytest
from hypothesis import settings

import opx

settings.register_profile("deterministic", derandomize=True)
settings.load_profile("deterministic")


@pytest.fixture
def cheb():
    return opx.chebyshev1()


@pytest.fixture
def lag():
    return opx.laguerre(0.5)


@pytest.fixture
def jac():
    return opx.jacobi(0.3, 0.7)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def sample_points(family, rng, count):
    a, b = family.support
    if np.isinf(b):
        return rng.uniform(a, a + 10.0, count)
    return rng.uniform(a, b, count)
