import numpy as np
import pytest

from striplab.quadrule import QuadConfig


@pytest.fixture(scope="session")
def cfg():
    return QuadConfig()


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260809)
