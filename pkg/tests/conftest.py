import numpy as np
import pytest

from partrace import _pykernels, matkernel
from partrace.blockops import BlockMatrix

try:
    from partrace import _ckernels
except ImportError:  # extension not built
    _ckernels = None

KERNELS = {"python": _pykernels, "cython": _ckernels}


@pytest.fixture
def astar():
    return BlockMatrix(2, 2, np.diag([1.0, 2.0, 3.0, 4.0]))


@pytest.fixture
def rng():
    return np.random.default_rng(20201019)


@pytest.fixture(params=["cython", "python"])
def backend(request, monkeypatch):
    """Run the test once per kernel implementation."""
    kernels = KERNELS[request.param]
    if kernels is None:
        pytest.skip("compiled kernels not built")
    monkeypatch.setattr(matkernel, "_kernels", kernels)
    return request.param


def cgauss(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def rand_herm(rng, d):
    g = cgauss(rng, (d, d))
    return (g + g.conj().T) / 2


def rand_psd(rng, d, rank=None):
    g = cgauss(rng, (d, d if rank is None else rank))
    return g @ g.conj().T
