"""Reproducible randomness: one 64-bit run seed, split into independent child keys.

Random points are counter based (a keyed BLAKE2 hash of the block number),
so any symbol can be read without generating the ones before it.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .points import PointStream

_BLOCK_BITS = 256


def child_key(seed: int, *path: int) -> int:
    """64-bit key for the child of ``seed`` at ``path`` (a splittable tree)."""
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit natural")
    ss = np.random.SeedSequence(seed, spawn_key=tuple(path))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@lru_cache(maxsize=4096)
def _block(key: int, block: int) -> np.ndarray:
    digest = hashlib.blake2b(block.to_bytes(16, "little"), key=key.to_bytes(8, "little"),
                             digest_size=_BLOCK_BITS // 8).digest()
    bits = np.unpackbits(np.frombuffer(digest, dtype=np.uint8), bitorder="little")
    bits.setflags(write=False)
    return bits


@dataclass(frozen=True)
class RandomBitPoint(PointStream):
    """Symbol ``one`` where the keyed bit stream has a 1, ``zero`` elsewhere."""

    key: int
    zero: int = 0
    one: int = 1
    kind = "random"

    def bit(self, i: int) -> int:
        return int(_block(self.key, i // _BLOCK_BITS)[i % _BLOCK_BITS])

    def symbol_at(self, i: int) -> int:
        return self.one if self.bit(i) else self.zero

    def symbols(self, start: int, stop: int) -> np.ndarray:
        if stop <= start:
            return np.zeros(0, dtype=np.int64)
        b0, b1 = start // _BLOCK_BITS, (stop - 1) // _BLOCK_BITS
        bits = np.concatenate([_block(self.key, b) for b in range(b0, b1 + 1)])
        bits = bits[start - b0 * _BLOCK_BITS: stop - b0 * _BLOCK_BITS]
        return np.where(bits == 1, self.one, self.zero).astype(np.int64)


def random_point(seed: int, path: tuple[int, ...], zero: int, one: int) -> RandomBitPoint:
    """A random point of ``{zero, one}^ω`` that visibly uses both symbols.

    Keys whose first 64 bits are constant are skipped (probability 2^-63),
    which makes non-constancy checkable from a short prefix.
    """
    if zero == one:
        raise ValueError("zero and one must differ")
    attempt = 0
    while True:
        pt = RandomBitPoint(child_key(seed, *path, attempt), zero, one)
        head = pt.symbols(0, 64)
        if head.min() != head.max():
            return pt
        attempt += 1
