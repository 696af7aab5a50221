"""Seedable, portable pseudo-random generator for domain sampling.

SplitMix64 (Steele, Lea, Flood 2014) with the standard constants:
state advances by 0x9E3779B97F4A7C15; outputs are finalized with the
0xBF58476D1CE4E5B9 / 0x94D049BB133111EB mix. Identity ids are folded into
the seed with FNV-1a so each (identity, seed) pair gets an independent,
reproducible stream. Reports built from these streams are byte-identical
across runs and platforms.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fnv1a64(text: str) -> int:
    h = _FNV_OFFSET
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * _FNV_PRIME) & _MASK
    return h


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        u = (self.next_u64() >> 11) * (2.0 ** -53)
        return lo + (hi - lo) * u

    def chance(self, p: float) -> bool:
        return self.uniform() < p

    def choice(self, seq):
        return seq[self.next_u64() % len(seq)]


def stream_for(identity_id: str, seed: int) -> SplitMix64:
    """Independent deterministic stream for one identity and campaign seed."""
    return SplitMix64(fnv1a64(identity_id) ^ (seed & _MASK))
