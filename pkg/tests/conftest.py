import numpy as np
import pytest

from transmission_bie.geometry import get_curve, sample


@pytest.fixture(scope="session")
def circle64():
    return sample(get_curve("circle"), 64)


@pytest.fixture(scope="session")
def kite64():
    return sample(get_curve("kite"), 64)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
