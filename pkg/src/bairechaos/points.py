"""Symbols, words and infinite points of the Baire space.

A point is never materialized. Every :class:`PointStream` is a deterministic
map from index to symbol, and most of them also describe themselves as a
sequence of periodic :class:`Segment` pieces. That description is what lets
the rest of the package jump over runs of 10^8 (or 10^80) identical symbols.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple, Sequence, TextIO

import numpy as np

Word = tuple[int, ...]

_INT64_MAX = np.iinfo(np.int64).max
_CHUNK = 1 << 20


class FormatError(ValueError):
    """Raised for malformed text inputs; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


def as_word(symbols: Iterable[int]) -> Word:
    word = tuple(int(s) for s in symbols)
    if any(s < 0 for s in word):
        raise ValueError(f"symbols must be natural numbers, got {word}")
    return word


def parse_word(text: str) -> Word:
    """Parse ``"0 1 2"`` (or ``"0,1,2"``) into a word. Empty text is the empty word."""
    tokens = text.replace(",", " ").split()
    try:
        return as_word(int(tok) for tok in tokens)
    except ValueError as exc:
        raise FormatError(f"bad word {text!r}: {exc}") from None


def format_word(word: Sequence[int]) -> str:
    return " ".join(str(s) for s in word)


def word_array(word: Sequence[int]) -> np.ndarray:
    if word and max(word) > _INT64_MAX:
        return np.array(word, dtype=object)
    return np.array(word, dtype=np.int64)


class Segment(NamedTuple):
    """Indices ``[start, stop)`` carry ``word`` repeated, read from ``phase``.

    ``stop`` is ``None`` for a segment that runs forever. The symbol at
    ``i`` is ``word[(phase + i - start) % len(word)]``.
    """

    start: int
    stop: int | None
    word: Word
    phase: int

    def at(self, i: int) -> int:
        return self.word[(self.phase + i - self.start) % len(self.word)]

    def clip(self, start: int) -> Segment:
        if start <= self.start:
            return self
        return Segment(start, self.stop, self.word, (self.phase + start - self.start) % len(self.word))

    def symbols(self, start: int, stop: int) -> np.ndarray:
        arr = word_array(self.word)
        offset = (self.phase + start - self.start) % len(arr)
        if len(arr) == 1:
            return np.full(stop - start, arr[0], dtype=arr.dtype)
        return np.resize(np.roll(arr, -offset), stop - start)


class PointStream:
    """A point ``x = x_0 x_1 x_2 ...`` of the Baire space.

    Subclasses implement :meth:`symbol_at`. Those whose structure is known
    in closed form also override :meth:`segments` and set
    ``exact_segments = True``; the fallback yields one segment per symbol.
    """

    kind = "abstract"
    exact_segments = False

    def symbol_at(self, i: int) -> int:
        raise NotImplementedError

    def segments(self, start: int = 0) -> Iterator[Segment]:
        i = start
        while True:
            yield Segment(i, i + 1, (self.symbol_at(i),), 0)
            i += 1

    def symbols(self, start: int, stop: int) -> np.ndarray:
        """Symbols ``x_start ... x_{stop-1}`` as an array (int64 when they fit)."""
        if stop <= start:
            return np.zeros(0, dtype=np.int64)
        if not self.exact_segments:
            vals = [self.symbol_at(i) for i in range(start, stop)]
            return np.array(vals, dtype=object if max(vals) > _INT64_MAX else np.int64)
        parts = []
        for seg in self.segments(start):
            hi = stop if seg.stop is None else min(seg.stop, stop)
            parts.append(seg.symbols(max(seg.start, start), hi))
            if hi >= stop:
                break
        if len(parts) == 1:
            return parts[0]
        if any(p.dtype == object for p in parts):
            parts = [p.astype(object) for p in parts]
        return np.concatenate(parts)

    def prefix(self, n: int) -> Word:
        return self[0:n]

    def __getitem__(self, key: int | slice):
        if isinstance(key, slice):
            start, stop, step = key.start or 0, key.stop, key.step or 1
            if stop is None:
                raise ValueError("points are infinite; slices need an explicit stop")
            return tuple(int(s) for s in self.symbols(start, stop)[::step])
        if key < 0:
            raise IndexError("negative index into an infinite point")
        return self.symbol_at(key)


@dataclass(frozen=True)
class ConstantPoint(PointStream):
    symbol: int
    kind = "constant"
    exact_segments = True

    def symbol_at(self, i: int) -> int:
        return self.symbol

    def segments(self, start: int = 0) -> Iterator[Segment]:
        yield Segment(start, None, (self.symbol,), 0)


@dataclass(frozen=True)
class PeriodicPoint(PointStream):
    """``word`` repeated forever."""

    word: Word
    kind = "periodic"
    exact_segments = True

    def __post_init__(self):
        if not self.word:
            raise ValueError("a periodic point needs a nonempty word")
        object.__setattr__(self, "word", as_word(self.word))

    @property
    def period(self) -> int:
        return len(self.word)

    def symbol_at(self, i: int) -> int:
        return self.word[i % len(self.word)]

    def segments(self, start: int = 0) -> Iterator[Segment]:
        yield Segment(start, None, self.word, start % len(self.word))


@dataclass(frozen=True)
class PrefixPoint(PointStream):
    """A finite word followed by a tail point; the shape of a loaded prefix dump."""

    head: Word
    tail: PointStream
    kind = "file-backed"

    @property
    def exact_segments(self) -> bool:
        return self.tail.exact_segments

    def symbol_at(self, i: int) -> int:
        if i < len(self.head):
            return self.head[i]
        return self.tail.symbol_at(i - len(self.head))

    def segments(self, start: int = 0) -> Iterator[Segment]:
        n = len(self.head)
        if start < n:
            yield Segment(start, n, self.head, start)
        for seg in self.tail.segments(max(0, start - n)):
            yield Segment(seg.start + n, None if seg.stop is None else seg.stop + n, seg.word, seg.phase)


@dataclass(frozen=True)
class ShiftedPoint(PointStream):
    inner: PointStream
    steps: int
    kind = "shifted"

    @property
    def exact_segments(self) -> bool:
        return self.inner.exact_segments

    def symbol_at(self, i: int) -> int:
        return self.inner.symbol_at(i + self.steps)

    def symbols(self, start: int, stop: int) -> np.ndarray:
        return self.inner.symbols(start + self.steps, stop + self.steps)

    def segments(self, start: int = 0) -> Iterator[Segment]:
        k = self.steps
        for seg in self.inner.segments(start + k):
            yield Segment(seg.start - k, None if seg.stop is None else seg.stop - k, seg.word, seg.phase)


def shift(p: PointStream, k: int = 1) -> PointStream:
    """The shift map applied ``k`` times."""
    if k < 0:
        raise ValueError("shift count must be >= 0")
    if k == 0 or isinstance(p, ConstantPoint):
        return p
    if isinstance(p, ShiftedPoint):
        return ShiftedPoint(p.inner, p.steps + k)
    return ShiftedPoint(p, k)


def aligned_segments(
    x: PointStream, y: PointStream, start: int, stop: int | None
) -> Iterator[tuple[Segment, Segment]]:
    """Walk both points over ``[start, stop)`` in pieces where each is periodic.

    Each yielded pair covers the same interval; both segments are clipped to
    it, so their ``phase`` fields are valid at the common start.
    """
    xs, ys = x.segments(start), y.segments(start)
    sx, sy = next(xs).clip(start), next(ys).clip(start)
    lo = start
    while stop is None or lo < stop:
        ends = [e for e in (sx.stop, sy.stop, stop) if e is not None]
        hi = min(ends) if ends else None
        yield Segment(lo, hi, sx.word, sx.phase), Segment(lo, hi, sy.word, sy.phase)
        if hi is None:
            return
        lo = hi
        sx = next(xs).clip(lo) if sx.stop == hi else sx.clip(lo)
        sy = next(ys).clip(lo) if sy.stop == hi else sy.clip(lo)


def first_difference(x: PointStream, y: PointStream, start: int, stop: int) -> int | None:
    """Least ``i`` in ``[start, stop)`` with ``x_i != y_i``, or ``None``."""
    if stop <= start:
        return None
    if not (x.exact_segments and y.exact_segments):
        for lo in range(start, stop, _CHUNK):
            hi = min(lo + _CHUNK, stop)
            diff = np.flatnonzero(x.symbols(lo, hi) != y.symbols(lo, hi))
            if diff.size:
                return lo + int(diff[0])
        return None
    for sx, sy in aligned_segments(x, y, start, stop):
        lo, hi = sx.start, sx.stop
        # two periodic runs agree everywhere once they agree on one common period
        span = min(hi - lo, math.lcm(len(sx.word), len(sy.word)))
        for a in range(0, span, _CHUNK):
            b = min(a + _CHUNK, span)
            diff = np.flatnonzero(sx.symbols(lo + a, lo + b) != sy.symbols(lo + a, lo + b))
            if diff.size:
                return lo + a + int(diff[0])
    return None


def lcp_length(x: PointStream, y: PointStream, cap: int) -> int | None:
    """Length of the longest common prefix, or ``None`` if it is at least ``cap``."""
    if cap < 0:
        raise ValueError("cap must be >= 0")
    return first_difference(x, y, 0, cap)


@dataclass(frozen=True)
class DyadicDistance:
    """``2**-exponent``; when ``capped`` the true distance is at most that value."""

    exponent: int
    capped: bool = False

    @property
    def value(self) -> Fraction:
        return Fraction(1, 2**self.exponent)

    def __str__(self) -> str:
        return f"<= 2^-{self.exponent}" if self.capped else f"2^-{self.exponent}"


def metric_distance(x: PointStream, y: PointStream, cap: int) -> DyadicDistance:
    if cap < 1:
        raise ValueError("cap must be >= 1")
    n = lcp_length(x, y, cap)
    if n is None:
        return DyadicDistance(cap, capped=True)
    return DyadicDistance(n)


def cylinder_contains(w: Sequence[int], x: PointStream) -> bool:
    return x.prefix(len(w)) == tuple(w)


def read_prefix(source: str | Path | TextIO) -> Word:
    """Read a prefix dump: whitespace separated decimal symbols, ``#`` comments."""
    if isinstance(source, (str, Path)):
        name = str(source)
        with open(source) as fh:
            lines = fh.readlines()
    else:
        name = getattr(source, "name", None)
        lines = source.readlines()
    out: list[int] = []
    for lineno, line in enumerate(lines, 1):
        if line.lstrip().startswith("#"):
            continue
        for tok in line.split():
            if not tok.isdigit():
                raise FormatError(f"expected a natural number, got {tok!r}", lineno, name)
            out.append(int(tok))
    return tuple(out)


def write_prefix(out: TextIO, symbols: Iterable[int], comments: Sequence[str] = (), per_line: int = 32) -> None:
    for c in comments:
        out.write(f"# {c}\n")
    line: list[str] = []
    for s in symbols:
        line.append(str(int(s)))
        if len(line) == per_line:
            out.write(" ".join(line) + "\n")
            line = []
    if line:
        out.write(" ".join(line) + "\n")


def load_point(path: str | Path, tail: PointStream | None = None) -> PrefixPoint:
    """A file-backed point. Without a tail the dumped word repeats periodically."""
    word = read_prefix(path)
    if not word:
        raise FormatError("empty prefix dump", source=str(path))
    return PrefixPoint(word, tail if tail is not None else PeriodicPoint(word))
