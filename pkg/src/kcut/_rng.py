"""Small deterministic PRNG shared by the compiled and pure-Python kernels.

Both backends implement the same splitmix64 stream, so a seeded run gives
bit-identical results whichever backend is loaded.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(state: int) -> tuple[int, int]:
    """Advance ``state`` and return ``(new_state, output)``."""
    state = (state + GOLDEN) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def derive_seed(seed: int, *keys: int) -> int:
    """Mix a base seed with integer keys into an independent 64-bit seed.

    Used to split seeds per repetition, chain, level or corpus row so that
    results never depend on iteration order.
    """
    state = seed & MASK64
    _, out = splitmix64(state)
    for key in keys:
        state = (out ^ ((key & MASK64) * GOLDEN)) & MASK64
        _, out = splitmix64(state)
    return out


class SplitMix:
    """Integer-only random stream (no floats, so both backends agree)."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next64(self) -> int:
        self.state, out = splitmix64(self.state)
        return out

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` by rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            x = self.next64()
            if x < limit:
                return x % bound
