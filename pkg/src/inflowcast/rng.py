"""Seeded pseudo-random streams: xoshiro256++ seeded through splitmix64.

The generator is implemented here rather than borrowed from numpy so that a
seed maps to the same stream on every platform and numpy version.
"""

import math

import numpy as np

DEFAULT_SEED = 9001

_MASK = (1 << 64) - 1


def _rotl(x, k):
    return ((x << k) | (x >> (64 - k))) & _MASK


def splitmix64(state):
    """Advance a splitmix64 state; returns (new_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, z ^ (z >> 31)


class Rng:
    """xoshiro256++ with Box-Muller normals.

    Single owner only: the object carries mutable state and a cached second
    normal variate. Use independent seeds for parallel streams.
    """

    def __init__(self, seed=DEFAULT_SEED):
        self.seed = int(seed)
        sm = self.seed & _MASK
        s = []
        for _ in range(4):
            sm, out = splitmix64(sm)
            s.append(out)
        self._s = s
        self._spare = None

    def next_u64(self):
        s0, s1, s2, s3 = self._s
        result = (_rotl((s0 + s3) & _MASK, 23) + s0) & _MASK
        t = (s1 << 17) & _MASK
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s = [s0, s1, s2, s3]
        return result

    def random(self):
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniform(self, low, high, size):
        out = np.empty(size, dtype=np.float64)
        flat = out.reshape(-1)
        for i in range(flat.size):
            flat[i] = low + (high - low) * self.random()
        return out

    def standard_normal(self):
        if self._spare is not None:
            z, self._spare = self._spare, None
            return z
        u1 = 1.0 - self.random()  # (0, 1], keeps log finite
        u2 = self.random()
        r = math.sqrt(-2.0 * math.log(u1))
        theta = 2.0 * math.pi * u2
        self._spare = r * math.sin(theta)
        return r * math.cos(theta)

    def normals(self, size):
        out = np.empty(size, dtype=np.float64)
        flat = out.reshape(-1)
        for i in range(flat.size):
            flat[i] = self.standard_normal()
        return out
