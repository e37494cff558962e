"""Portable seeded random streams.

Instances must regenerate bit-identically from a 64-bit seed on any platform,
so the generator is fixed: xoshiro256++ whose state is filled by splitmix64.

Conventions
-----------
* uniform: ``((u >> 11) + 0.5) * 2**-53``, strictly inside (0, 1).
* normal: Box-Muller on consecutive uniform pairs ``(u1, u2)`` giving
  ``sqrt(-2 log u1) * cos(2 pi u2)`` then ``sqrt(-2 log u1) * sin(2 pi u2)``.
  An odd request discards the trailing sine variate.
* bounded integer below ``b``: ``floor(uniform * b)``.
"""

import numba
import numpy as np

_MASK = (1 << 64) - 1


def splitmix64(seed):
    """Return the next (state, output) pair of splitmix64 as Python ints."""
    state = (seed + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, z ^ (z >> 31)


@numba.njit(cache=True)
def _rotl(x, k):
    return (x << numba.uint64(k)) | (x >> numba.uint64(64 - k))


@numba.njit(cache=True)
def _fill_uint64(s, out):
    for i in range(out.shape[0]):
        result = _rotl(s[0] + s[3], 23) + s[0]
        t = s[1] << numba.uint64(17)
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        out[i] = result


class Xoshiro256pp:
    """xoshiro256++ stream seeded from one 64-bit integer.

    Parameters
    ----------
    seed : int
        Any integer; reduced modulo 2**64.
    state : sequence of 4 ints, optional
        Raw state, overrides ``seed`` (used for reference test vectors).
    """

    def __init__(self, seed=0, state=None):
        if state is None:
            sm = seed & _MASK
            words = []
            for _ in range(4):
                sm, out = splitmix64(sm)
                words.append(out)
        else:
            words = [int(w) & _MASK for w in state]
            if len(words) != 4:
                raise ValueError("xoshiro256++ state has exactly 4 words")
        if not any(words):
            raise ValueError("all-zero state is not allowed")
        self._s = np.array(words, dtype=np.uint64)

    @property
    def state(self):
        return tuple(int(w) for w in self._s)

    def next_uint64(self, size):
        out = np.empty(int(size), dtype=np.uint64)
        _fill_uint64(self._s, out)
        return out

    def uniform(self, size):
        u = self.next_uint64(size) >> np.uint64(11)
        return (u.astype(np.float64) + 0.5) * 2.0**-53

    def normal(self, size):
        size = int(size)
        pairs = (size + 1) // 2
        u = self.uniform(2 * pairs).reshape(pairs, 2)
        radius = np.sqrt(-2.0 * np.log(u[:, 0]))
        angle = 2.0 * np.pi * u[:, 1]
        z = np.empty((pairs, 2))
        z[:, 0] = radius * np.cos(angle)
        z[:, 1] = radius * np.sin(angle)
        return z.ravel()[:size]

    def integers_below(self, bound, size):
        return np.floor(self.uniform(size) * bound).astype(np.int64)

    def choice(self, n, k):
        """Draw ``k`` distinct indices from ``range(n)`` by partial Fisher-Yates."""
        if not 0 <= k <= n:
            raise ValueError(f"cannot draw {k} distinct items from {n}")
        pool = np.arange(n)
        u = self.uniform(k)
        for i in range(k):
            j = i + int(u[i] * (n - i))
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k].copy()
