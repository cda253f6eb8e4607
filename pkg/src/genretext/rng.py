"""Seeded random generator with a bit-exact cross-implementation contract.

The generator is SplitMix64; uniform draws are (next64 >> 11) * 2**-53 and
categorical sampling walks cumulative weights in declaration order, so any
implementation of the same contract reproduces identical streams.
"""

from __future__ import annotations

from typing import Sequence

_MASK64 = 0xFFFFFFFFFFFFFFFF
_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    """SplitMix64 stream seeded with a 64-bit unsigned integer."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_float(self) -> float:
        """Uniform draw in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def choice_index(self, n: int) -> int:
        """Uniform index in [0, n)."""
        if n <= 0:
            raise ValueError("choice_index needs n >= 1")
        return min(int(self.next_float() * n), n - 1)

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle driven by this stream."""
        for i in range(len(items) - 1, 0, -1):
            j = self.choice_index(i + 1)
            items[i], items[j] = items[j], items[i]


def sample_categorical(rng: SplitMix64, features: Sequence[str], weights: Sequence[float]) -> str:
    """Sample one feature by cumulative weights in declaration order.

    Zero-weight features are unreachable: a draw u satisfies u < cum only
    once some positive weight has been accumulated.
    """
    u = rng.next_float()
    cum = 0.0
    last_positive = None
    for feature, weight in zip(features, weights):
        cum += weight
        if weight > 0.0:
            last_positive = feature
        if u < cum:
            return feature if weight > 0.0 else last_positive  # type: ignore[return-value]
    if last_positive is None:
        raise ValueError("all weights are zero")
    return last_positive


def largest_remainder(weights: Sequence[float], total: int) -> list[int]:
    """Apportion `total` into integer counts proportional to `weights`.

    Largest-remainder method; remainder ties broken by declaration order.
    """
    if total < 0:
        raise ValueError("total must be non-negative")
    s = sum(weights)
    if s <= 0:
        raise ValueError("weights must have positive sum")
    quotas = [w / s * total for w in weights]
    counts = [int(q) for q in quotas]
    short = total - sum(counts)
    order = sorted(range(len(weights)), key=lambda i: (-(quotas[i] - counts[i]), i))
    for i in order[:short]:
        counts[i] += 1
    return counts
