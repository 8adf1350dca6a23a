"""Deterministic random streams built on splitmix64.

Every stochastic ingredient of the package (error injection, seeded test
instances) draws from this generator, so a run is reproducible from its
integer seed alone, independent of numpy's global state or version.

The stream: a 64-bit counter advances by the constant 0x9E3779B97F4A7C15 and
each output is the counter scrambled by two xor-shift multiplies.  Uniform
doubles take the top 53 bits; normals come from a Box-Muller pair.
"""

from __future__ import annotations

import math

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """Splitmix64 stream with convenience samplers."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def normal(self) -> float:
        # Box-Muller; u is bumped away from 0 so log() is safe.
        u = self.uniform()
        while u <= 0.0:
            u = self.uniform()
        v = self.uniform()
        return math.sqrt(-2.0 * math.log(u)) * math.cos(2.0 * math.pi * v)

    def complex_normal(self) -> complex:
        return complex(self.normal(), self.normal())

    def complex_vector(self, n: int) -> np.ndarray:
        return np.array([self.complex_normal() for _ in range(n)], dtype=np.complex128)

    def unit_vector(self, n: int) -> np.ndarray:
        """Unit-norm complex vector; redraws in the measure-zero zero case."""
        while True:
            v = self.complex_vector(n)
            nv = float(np.linalg.norm(v))
            if nv > 1e-12:
                return v / nv

    def complex_matrix(self, n: int) -> np.ndarray:
        return np.array(
            [[self.complex_normal() for _ in range(n)] for _ in range(n)],
            dtype=np.complex128,
        )

    def hermitian_matrix(self, n: int) -> np.ndarray:
        g = self.complex_matrix(n)
        return (g + g.conj().T) / 2.0
