import math

import numpy as np
import pytest

from normcomm.center import WeightedSpectrum

W = np.exp(2j * np.pi / 3)
CUBE = np.array([1.0, W, W * W])
SQRT3_2 = math.sqrt(3) / 2


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def equilateral():
    return WeightedSpectrum.uniform(CUBE)


def uniform(*pts):
    return WeightedSpectrum.uniform(np.array(pts, dtype=complex))
