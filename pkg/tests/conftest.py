import math

import numpy as np
import pytest

from revivals import FockSpace

OMEGA0 = 0.15 * math.pi / 2  # 0.23561944901923448
ALPHA = -1.9
B1 = 0.005
B2 = 0.005


@pytest.fixture
def space30():
    return FockSpace(30)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_density(rng, dim):
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = x @ x.conj().T
    return rho / np.trace(rho).real


def random_hermitian(rng, dim):
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (x + x.conj().T)
