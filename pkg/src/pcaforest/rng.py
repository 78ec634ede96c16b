"""Deterministic, portable random number generation.

Every stochastic step in the package (train/test shuffling, bootstrap
resampling, per-node feature subsets, network weight initialisation) draws
from SplitMix64 so results reproduce bit-for-bit across platforms and can be
replayed by an implementation in any language from this description alone.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31)


def stream_seed(seed: int, index: int) -> int:
    """Seed for an independent derived stream.

    Defined as the (index + 1)-th raw output of SplitMix64 seeded with
    ``seed``, i.e. ``mix(seed + (index + 1) * GAMMA)`` in 64-bit arithmetic.
    Used to give every tree, class and epoch its own stream so that results
    do not depend on processing order.
    """
    return _mix((seed + (index + 1) * _GAMMA) & _MASK64)


class SplitMix64:
    """SplitMix64 generator (Steele, Lea & Flood, 2014).

    The 64-bit state advances by the golden-ratio constant
    0x9E3779B97F4A7C15; each output is the standard two-round
    xor-shift-multiply mix of the advanced state.
    """

    __slots__ = ("_state",)

    def __init__(self, seed: int) -> None:
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        return _mix(self._state)

    def next_double(self) -> float:
        """Uniform double in [0, 1): the top 53 bits of the next output."""
        return (self.next_u64() >> 11) * 2.0**-53

    def below(self, n: int) -> int:
        """Uniform integer in [0, n), by modulo reduction of one output.

        The modulo bias is below n / 2**64 and is accepted for the sake of a
        trivially portable definition.
        """
        if n <= 0:
            raise ValueError("below() requires n >= 1")
        return self.next_u64() % n

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle, walking from the last index down to 1."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def subset(self, k: int, n: int) -> tuple[int, ...]:
        """k distinct integers from [0, n), sorted ascending.

        Floyd's sampling algorithm: for j = n-k .. n-1 draw t = below(j + 1)
        and keep t unless already kept, in which case keep j. Consumes
        exactly k draws regardless of collisions.
        """
        if not 0 <= k <= n:
            raise ValueError(f"cannot draw {k} distinct values from range({n})")
        chosen: set[int] = set()
        for j in range(n - k, n):
            t = self.below(j + 1)
            chosen.add(j if t in chosen else t)
        return tuple(sorted(chosen))
