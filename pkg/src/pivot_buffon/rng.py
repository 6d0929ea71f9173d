"""SplitMix64, in scalar and vectorised form.

Output ``n`` (0-based) of the stream seeded with ``s`` is
``mix(s + (n + 1) * GAMMA mod 2**64)``, so any position can be reached in
O(1). Uniform doubles use the top 53 bits: ``(x >> 11) * 2**-53``.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_INV_2_53 = 2.0**-53


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def to_unit(x: int) -> float:
    return (x >> 11) * _INV_2_53


class SplitMix64:
    """Sequential SplitMix64 generator."""

    def __init__(self, seed: int, position: int = 0):
        if not 0 <= seed <= MASK64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed!r}")
        self.seed = seed
        self.position = position

    def next_u64(self) -> int:
        self.position += 1
        return mix64(self.seed + self.position * GAMMA)

    def random(self) -> float:
        return to_unit(self.next_u64())


def u64_block(seed: int, start: int, count: int) -> np.ndarray:
    """Stream outputs ``start .. start + count - 1`` as a uint64 array."""
    base = np.uint64((seed + start * GAMMA) & MASK64)
    steps = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = base + steps * np.uint64(GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def uniform_block(seed: int, start: int, count: int) -> np.ndarray:
    """Uniform doubles in ``[0, 1)`` for stream outputs ``start ..``."""
    return (u64_block(seed, start, count) >> np.uint64(11)).astype(np.float64) * _INV_2_53
