"""Block-length schedules ``(s_j, m_j)`` for the three constructions.

All three start at ``s_0 = 1`` and grow like ``2**(j*(j+1)/2)``, so values are
Python integers throughout and only a handful of terms are ever needed to
cover any index a computer can reach.
"""

from __future__ import annotations

import bisect
import threading
from dataclasses import dataclass, field

VARIANTS = ("sft_cylinder", "dense", "sbt")


@dataclass(frozen=True)
class Schedule:
    """Exact, lazily extended sequences ``s`` and ``m``.

    ``word_length`` only matters for ``sft_cylinder`` (``m_j`` there counts
    the leading ``w K``); ``M`` only for ``sbt``.
    """

    variant: str
    word_length: int = 0
    M: int = 1
    _s: list[int] = field(default_factory=lambda: [1], init=False, repr=False, compare=False)
    _m: list[int] = field(default_factory=list, init=False, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown schedule variant {self.variant!r}")
        if self.word_length < 0:
            raise ValueError("word length must be >= 0")
        if self.M < 1:
            raise ValueError("block length M must be >= 1")

    @property
    def scale(self) -> int:
        """Symbols per unit of ``s`` (``M`` for sbt, else 1)."""
        return self.M if self.variant == "sbt" else 1

    @property
    def base(self) -> int:
        """``m_{-1}``: where block 0 starts."""
        return 1 + self.word_length if self.variant == "sft_cylinder" else 0

    def _extend(self, j: int) -> None:
        with self._lock:
            s, m = self._s, self._m
            while len(m) <= j:
                k = len(m)
                m.append((m[-1] if m else self.base) + self.scale * s[k])
                s.append(2 ** (k + 1) * self.scale * m[k])

    def s(self, j: int) -> int:
        if j < 0:
            raise IndexError("s_j is defined for j >= 0")
        self._extend(j)
        return self._s[j]

    def m(self, j: int) -> int:
        if j == -1:
            return self.base
        if j < -1:
            raise IndexError("m_j is defined for j >= -1")
        self._extend(j)
        return self._m[j]

    def block_length(self, j: int) -> int:
        return self.scale * self.s(j)

    def block_of(self, offset: int) -> int:
        """The block ``j`` with ``m_{j-1} <= offset < m_j`` (binary search over ``m``)."""
        if offset < self.base:
            raise ValueError(f"offset {offset} precedes block 0")
        j = 0
        while self.m(j) <= offset:
            j = 2 * j + 1
        return bisect.bisect_right(self._m, offset, 0, j + 1)


def make_schedule(variant: str, *, word_length: int = 0, M: int = 1) -> Schedule:
    return Schedule(variant, word_length=word_length, M=M)
