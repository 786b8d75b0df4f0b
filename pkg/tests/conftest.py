import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, max_examples=50, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_state(rng, D):
    v = rng.normal(size=D) + 1j * rng.normal(size=D)
    return v / np.linalg.norm(v)


def random_density(rng, D, rank=None):
    rank = D if rank is None else rank
    G = rng.normal(size=(D, rank)) + 1j * rng.normal(size=(D, rank))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


def random_hermitian(rng, D):
    G = rng.normal(size=(D, D)) + 1j * rng.normal(size=(D, D))
    return (G + G.conj().T) / 2


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
