"""Deterministic pseudo-random generation shared by the whole toolchain.

Every randomized step (workload synthesis, placement sampling, mapping
restarts, Poisson injection) draws from the splitmix64 generator below,
never from Python's own RNG, so any result reproduces from a 64-bit seed
regardless of platform or interpreter version.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """splitmix64 finalizer: avalanche a 64-bit value."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


class SplitMix64:
    """splitmix64 stream generator (Steele/Lea/Flood shift-xor-multiply family)."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return mix64(self._state)

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n), unbiased via rejection sampling."""
        if n <= 0:
            raise ValueError(f"randrange bound must be positive, got {n}")
        threshold = (1 << 64) - ((1 << 64) % n)
        while True:
            u = self.next_u64()
            if u < threshold:
                return u % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], both ends inclusive."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        return lo + self.randrange(hi - lo + 1)

    def uniform(self) -> float:
        """Float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample_prefix(self, items, k: int) -> list:
        """First k entries of a partial Fisher-Yates shuffle (injective sample)."""
        arr = list(items)
        if not 0 <= k <= len(arr):
            raise ValueError(f"cannot sample {k} of {len(arr)} items")
        for i in range(k):
            j = i + self.randrange(len(arr) - i)
            arr[i], arr[j] = arr[j], arr[i]
        return arr[:k]


def substream(seed: int, index: int) -> SplitMix64:
    """Independent child generator for stream `index` of a parent seed.

    The rule is fixed: child seed = mix64(seed + (index + 1) * golden gamma).
    Substreams are what make restarts and trials individually reproducible
    and order-independent.
    """
    if index < 0:
        raise ValueError(f"substream index must be non-negative, got {index}")
    return SplitMix64(mix64((seed + (index + 1) * _GOLDEN) & _MASK64))
