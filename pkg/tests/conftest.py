import numpy as np
import pytest

from flowerlab.spherecore import uniform_angle_grid


@pytest.fixture(scope="session")
def grid720():
    return uniform_angle_grid(720)


@pytest.fixture(scope="session")
def grid4096():
    return uniform_angle_grid(4096)


@pytest.fixture(scope="session")
def grid256():
    return uniform_angle_grid(256)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
