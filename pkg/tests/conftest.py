import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from nsqpwd.params import ParamTuple

settings.register_profile("default", deadline=None, max_examples=50, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_omega(rng: np.random.Generator) -> ParamTuple:
    """Random tuple with a well-conditioned symmetric B."""
    while True:
        b = rng.uniform(-2.0, 2.0, size=3)
        B = np.array([[b[0], b[1]], [b[1], b[2]]])
        if abs(np.linalg.det(B)) > 0.5 and np.linalg.cond(B) < 20:
            break
    A, C, D, E = (rng.uniform(-1.0, 1.0, size=(2, 2)) for _ in range(4))
    return ParamTuple(A, B, C, D, E)


def random_field_values(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)
