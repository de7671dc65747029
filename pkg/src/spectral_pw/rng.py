"""
Deterministic random ensembles.

The stream is SplitMix64: output ``i`` is ``mix(seed + (i + 1) * 0x9E3779B97F4A7C15)``
with the standard 30/27/31 xor-shift-multiply finalizer, all modulo 2^64. The top
53 bits give uniforms in (0, 1), and Box-Muller turns pairs of uniforms into
complex normals with ``E|z|^2 = 1``. Integer arithmetic is exact, so a seed
yields the same bits on every platform.
"""

from __future__ import annotations

import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    def __init__(self, seed: int):
        self.state = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
        self.counter = 0

    def next_uint64(self, n: int) -> np.ndarray:
        with np.errstate(over="ignore"):
            steps = np.arange(self.counter + 1, self.counter + n + 1, dtype=np.uint64)
            out = _mix(self.state + steps * _GAMMA)
        self.counter += n
        return out

    def uniform(self, n: int) -> np.ndarray:
        """Uniforms in the open interval (0, 1)."""
        bits = self.next_uint64(n) >> np.uint64(11)
        return (bits.astype(np.float64) + 0.5) / 2.0**53

    def normal(self, n: int) -> np.ndarray:
        m = (n + 1) // 2
        u1 = self.uniform(m)
        u2 = self.uniform(m)
        rad = np.sqrt(-2.0 * np.log(u1))
        z = np.concatenate([rad * np.cos(2 * np.pi * u2), rad * np.sin(2 * np.pi * u2)])
        return z[:n]

    def complex_normal(self, size) -> np.ndarray:
        """Complex standard normals shaped ``size``, real and imaginary parts of variance 1/2."""
        shape = (size,) if np.isscalar(size) else tuple(size)
        n = int(np.prod(shape))
        z = self.normal(2 * n)
        return ((z[:n] + 1j * z[n:]) / np.sqrt(2.0)).reshape(shape)


def rng_stream(seed: int, dim: int):
    """Endless generator of complex standard-normal vectors of length ``dim``."""
    gen = SplitMix64(seed)
    while True:
        yield gen.complex_normal(dim)


def random_ensemble(seed: int, count: int, dim: int) -> np.ndarray:
    """``count`` complex standard-normal vectors of length ``dim``."""
    return SplitMix64(seed).complex_normal((count, dim))
