"""Portable SplitMix64 generator used by the RANDOM task-sorting policy.

The stream, bounded draws and shuffle are fully specified here so that any
other implementation can reproduce the same permutations:

* state advances by ``0x9E3779B97F4A7C15`` (mod 2**64) before each output,
  and the output is the standard SplitMix64 finalizer of the new state;
* ``below(n)`` rejects outputs ``r < 2**64 mod n`` and returns ``r mod n``;
* ``shuffle`` is Fisher-Yates from the last index down: for ``i = n-1 .. 1``
  swap ``i`` with ``below(i + 1)``;
* a simulation seeds its stream with ``derive_seed(seed, config_name)``.
"""
from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & MASK64
    return h


def derive_seed(seed: int, label: str) -> int:
    """64-bit stream seed from a user seed and a label such as a config name."""
    return mix64((seed & MASK64) ^ fnv1a64(label.encode("utf-8")))


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return mix64(self.state)

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("bound must be positive")
        threshold = (1 << 64) % n
        while True:
            r = self.next_u64()
            if r >= threshold:
                return r % n

    def shuffle_reference(self, items: list) -> None:
        """In-place Fisher-Yates using scalar draws."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def shuffle(self, items: list) -> None:
        """Same permutation and stream position as :meth:`shuffle_reference`.

        All draws are computed in one vectorised pass; if any of them would be
        rejected (probability about n / 2**64) the scalar path is used instead.
        """
        n = len(items)
        if n < 2:
            return
        m = n - 1
        with np.errstate(over="ignore"):
            steps = np.arange(1, m + 1, dtype=np.uint64)
            z = np.uint64(self.state) + steps * np.uint64(GOLDEN_GAMMA)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
            z = z ^ (z >> np.uint64(31))
            bounds = np.arange(n, 1, -1, dtype=np.uint64)
            thresholds = (np.uint64(0) - bounds) % bounds
        if np.any(z < thresholds):
            self.shuffle_reference(items)
            return
        self.state = (self.state + m * GOLDEN_GAMMA) & MASK64
        picks = (z % bounds).tolist()
        for i, j in zip(range(m, 0, -1), picks):
            items[i], items[j] = items[j], items[i]
