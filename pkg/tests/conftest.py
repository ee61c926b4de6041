import numpy as np
import pytest

from sliceft.multivector import Params
from sliceft.slicefield import GridSpec


@pytest.fixture(scope="session")
def params():
    return Params(2, 0.5)


@pytest.fixture(scope="session")
def grid(params):
    return GridSpec.default(params)


@pytest.fixture(scope="session")
def small_grid():
    # still resolves psi_{j,k}, j, k <= 3 to roundoff
    return GridSpec(12.0, 64, 12.0, 64)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
