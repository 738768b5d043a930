"""Counter-based random bits and lazily revealed uniform reals.

Every 64-bit word is a pure function of ``(seed, address, block index)``:
addresses are folded into a key with the SplitMix64 finalizer and block j
of a stream is the j-th SplitMix64 output from that key.  Re-running an
attempt at a higher precision therefore sees the same leading digits, and
attempts can be evaluated in any order, in parallel, or in numpy batches.
"""
from __future__ import annotations

import secrets
from typing import Tuple

import numpy as np

from .interval import DyadicInterval

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
BLOCK_BITS = 64


def entropy_seed() -> int:
    """A fresh 64-bit seed from the operating system."""
    return secrets.randbits(64)


def mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def child_key(key: int, index: int) -> int:
    return mix64((key + mix64((index + GOLDEN) & MASK64)) & MASK64)


def block_word(key: int, j: int) -> int:
    return mix64((key + (j + 1) * GOLDEN) & MASK64)


def root_key(seed: int) -> int:
    if not 0 <= seed <= MASK64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    return mix64((seed + GOLDEN) & MASK64)


# -- vectorized twins over uint64 arrays (wrap-around arithmetic) ------------

def mix64_np(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def child_key_np(key, index: np.ndarray) -> np.ndarray:
    key = np.asarray(key, dtype=np.uint64)
    return mix64_np(key + mix64_np(index.astype(np.uint64) + np.uint64(GOLDEN)))


def block_word_np(key: np.ndarray, j: int) -> np.ndarray:
    return mix64_np(key + np.uint64(((j + 1) * GOLDEN) & MASK64))


class RandomStream:
    """Deterministic bit source identified by a seed and a hierarchical address."""

    __slots__ = ("seed", "address", "key")

    def __init__(self, seed: int, address: Tuple[int, ...] = (), key: int = None):
        self.seed = seed
        self.address = tuple(address)
        if key is None:
            key = root_key(seed)
            for i in self.address:
                key = child_key(key, i)
        self.key = key

    def child(self, *index: int) -> "RandomStream":
        key = self.key
        for i in index:
            key = child_key(key, i)
        return RandomStream(self.seed, self.address + index, key)

    def block(self, j: int) -> int:
        """The j-th 64-bit word of this stream."""
        return block_word(self.key, j)

    def bits(self, n: int) -> int:
        """The first n bits of the stream, most significant first."""
        blocks = -(-n // BLOCK_BITS)
        acc = 0
        for j in range(blocks):
            acc = (acc << BLOCK_BITS) | block_word(self.key, j)
        return acc >> (blocks * BLOCK_BITS - n)

    def __repr__(self) -> str:
        return f"RandomStream(seed={self.seed}, address={self.address})"


class LazyUniform:
    """A uniform real in (0, 1) whose binary digits are drawn on demand.

    Digits already revealed never change; asking for more digits only
    appends to them.
    """

    __slots__ = ("key", "_digits", "_ndigits", "revealed")

    def __init__(self, stream: RandomStream):
        self.key = stream.key
        self._digits = 0
        self._ndigits = 0
        self.revealed = 0

    def digits(self, p: int) -> int:
        """The first p binary digits as an integer in [0, 2**p)."""
        while self._ndigits < p:
            self._digits = (self._digits << BLOCK_BITS) | block_word(self.key, self._ndigits // BLOCK_BITS)
            self._ndigits += BLOCK_BITS
        if p > self.revealed:
            self.revealed = p
        return self._digits >> (self._ndigits - p)

    def reveal(self, p: int) -> DyadicInterval:
        """``[0.b1..bp, 0.b1..bp + 2**-p]`` for the first p digits."""
        if p < 1:
            raise ValueError("at least one digit must be revealed")
        k = self.digits(p)
        return DyadicInterval(k, k + 1, -p, p)

    def as_interval(self) -> DyadicInterval:
        if self.revealed == 0:
            return DyadicInterval(0, 1, 0, 1)
        return self.reveal(self.revealed)

    def __repr__(self) -> str:
        return f"LazyUniform(key={self.key:#x}, revealed={self.revealed})"


def fresh_uniform(stream: RandomStream) -> LazyUniform:
    return LazyUniform(stream)


def reveal(u: LazyUniform, p: int) -> DyadicInterval:
    return u.reveal(p)
