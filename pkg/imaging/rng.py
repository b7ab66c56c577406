"""Portable pseudo-random generator used for dataset splits.

xoshiro256** seeded through splitmix64. Pure integer arithmetic, so a given
seed yields the same stream on every platform and numpy version.
"""

from typing import List, MutableSequence, Tuple, TypeVar

MASK64 = (1 << 64) - 1

T = TypeVar('T')


def splitmix64(state: int) -> Tuple[int, int]:
    """Advance a splitmix64 state.

    Returns:
        Tuple of (new_state, output)
    """
    state = (state + 0x9E3779B97F4A7C15) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


class Xoshiro256:
    """xoshiro256** generator."""

    def __init__(self, seed: int):
        state = seed & MASK64
        self._s: List[int] = []
        for _ in range(4):
            state, value = splitmix64(state)
            self._s.append(value)

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s
        result = (_rotl((s1 * 5) & MASK64, 7) * 9) & MASK64
        t = (s1 << 17) & MASK64

        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)

        self._s = [s0, s1, s2, s3]
        return result

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) without modulo bias."""
        if n <= 0:
            raise ValueError(f"Upper bound must be positive, got {n}")
        # Largest multiple of n that fits in 64 bits
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def shuffle(self, items: MutableSequence[T]) -> MutableSequence[T]:
        """Fisher-Yates shuffle in place; returns the same sequence."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items

    def __repr__(self) -> str:
        return f"<Xoshiro256: {[hex(s) for s in self._s]}>"
