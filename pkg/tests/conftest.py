import numpy as np
import pytest

from vrdsim.states import DensityOperator, PureState


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def random_density(rng, dims=(2, 2), rank=None):
    d = int(np.prod(dims))
    rank = rank or d
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    m = g @ g.conj().T
    m /= np.trace(m).real
    return DensityOperator(m, dims, validate=False)


def random_pure(rng, dims=(2, 2)):
    d = int(np.prod(dims))
    amp = rng.normal(size=d) + 1j * rng.normal(size=d)
    return PureState(amp / np.linalg.norm(amp), dims)


def random_hermitian(rng, d):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (g + g.conj().T) / 2
