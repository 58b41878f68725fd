"""Portable seeded randomness for the property suites.

The stream is splitmix64 on a 64-bit counter; uniform doubles take the
top 53 bits, and Gaussians come from Box-Muller on consecutive uniform
pairs.  Every draw is a pure function of (seed, position), so reports
are reproducible across platforms and across reimplementations of the
same stream.
"""
from __future__ import annotations

import hashlib
import math

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """splitmix64 stream with vectorized output."""

    def __init__(self, seed: int):
        self._state = int(seed) & _MASK

    def raw(self, count: int) -> np.ndarray:
        idx = np.arange(1, count + 1, dtype=np.uint64)
        z = np.uint64(self._state) + np.uint64(_GOLDEN) * idx
        self._state = (self._state + _GOLDEN * count) & _MASK
        z ^= z >> np.uint64(30)
        z *= np.uint64(_MIX1)
        z ^= z >> np.uint64(27)
        z *= np.uint64(_MIX2)
        z ^= z >> np.uint64(31)
        return z

    def uniform(self, count: int) -> np.ndarray:
        """Uniform doubles in [0, 1)."""
        return (self.raw(count) >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def uniform_in(self, lo: float, hi: float, count: int) -> np.ndarray:
        return lo + (hi - lo) * self.uniform(count)

    def normal(self, count: int) -> np.ndarray:
        """Standard normals via Box-Muller; each call consumes whole pairs."""
        pairs = (count + 1) // 2
        u1 = self.uniform(pairs)
        u2 = self.uniform(pairs)
        r = np.sqrt(-2.0 * np.log1p(-u1))
        ang = 2.0 * math.pi * u2
        out = np.concatenate([r * np.cos(ang), r * np.sin(ang)])
        return out[:count]

    def complex_normal(self, shape) -> np.ndarray:
        """Standard complex normals, unit total variance per entry."""
        size = int(np.prod(shape))
        flat = self.normal(2 * size)
        re = flat[0::2]
        im = flat[1::2]
        return ((re + 1j * im) / math.sqrt(2.0)).reshape(shape)


def subseed(seed: int, suite: str, name: str) -> int:
    """Independent per-property seed from hashing (seed, suite, property)."""
    digest = hashlib.blake2b(f"{seed}:{suite}:{name}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")
