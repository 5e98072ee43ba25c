import numpy as np
import pytest

from ftriad.algebra import BUILTIN_NAMES, builtin


def random_complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_invertible(rng, d=3, max_cond=1e6):
    while True:
        m = random_complex(rng, (d, d))
        if np.linalg.cond(m) < max_cond:
            return m


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def algebras():
    return {n: builtin(n) for n in BUILTIN_NAMES}
