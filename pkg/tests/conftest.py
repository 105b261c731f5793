import math

import numpy as np
import pytest

from wstate.model import SystemParams

TWO_PI = 2 * math.pi


def ghz(f):
    """Ordinary frequency in GHz -> rad/ns."""
    return TWO_PI * f


@pytest.fixture
def three_mode():
    return SystemParams(couplings=(ghz(0.0225),) * 3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
