"""Shared instance builders for the test suite (all seeded, no global RNG)."""

import numpy as np
import pytest

from matfunc.numkernel import FunctionSpec, spectral_norm
from matfunc.rng import SplitMix64


def unit_norm_matrix(rng: SplitMix64, n: int, hermitian: bool) -> np.ndarray:
    g = rng.hermitian_matrix(n) if hermitian else rng.complex_matrix(n)
    return g / spectral_norm(g)


def jordan_like(n: int, diag: float = 0.4, off: float = 0.9) -> np.ndarray:
    """Non-normal upper bidiagonal test matrix, rescaled to unit norm."""
    a = diag * np.eye(n, dtype=np.complex128)
    for i in range(n - 1):
        a[i, i + 1] = off
    return a / spectral_norm(a)


@pytest.fixture
def rng():
    return SplitMix64(20240810)


def catalog_functions():
    return (
        FunctionSpec.exp(2.0),
        FunctionSpec.cos(2.0),
        FunctionSpec.sin(2.0),
        FunctionSpec.geometric(3.0, 2.0),
    )
