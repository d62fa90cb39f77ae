"""Forbidden-word bases, allowed words and the safe symbol.

A :class:`SubshiftSpec` is a finite basis of forbidden words, optionally
with a declared gluing constant ``N`` (the subshift-of-bounded-type
assertion) and an optional extra membership oracle for languages that a
finite basis cannot express.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Callable, Iterable, Iterator, Sequence

from .matching import AhoCorasick
from .points import FormatError, PointStream, Word, as_word

_STREAM_CHUNK = 1 << 16


@dataclass(frozen=True)
class ForbiddenBasis:
    words: tuple[Word, ...] = ()

    def __post_init__(self):
        words = tuple(sorted({as_word(w) for w in self.words}))
        if any(len(w) == 0 for w in words):
            raise ValueError("the empty word cannot be forbidden")
        object.__setattr__(self, "words", words)

    @property
    def max_word_length(self) -> int:
        return max((len(w) for w in self.words), default=0)

    @property
    def max_symbol(self) -> int | None:
        return max((s for w in self.words for s in w), default=None)

    @cached_property
    def matcher(self) -> AhoCorasick:
        return AhoCorasick(self.words)

    def __len__(self) -> int:
        return len(self.words)


@dataclass(frozen=True)
class SubshiftSpec:
    basis: ForbiddenBasis = field(default_factory=ForbiddenBasis)
    gluing_constant_N: int | None = None
    description: str = ""
    # Extra language constraint beyond the basis; makes allowedness partly asserted.
    oracle: Callable[[Word], bool] | None = field(default=None, compare=False)

    @classmethod
    def from_words(cls, words: Iterable[Sequence[int]], N: int | None = None, description: str = "") -> SubshiftSpec:
        return cls(ForbiddenBasis(tuple(tuple(w) for w in words)), N, description)

    @property
    def max_word_length(self) -> int:
        return self.basis.max_word_length

    @property
    def sbt_constant(self) -> int:
        """``max(L, N)`` with ``L`` the longest basis word."""
        if self.gluing_constant_N is None:
            raise ValueError("spec has no gluing constant N")
        return max(self.basis.max_word_length, self.gluing_constant_N)


def is_allowed(spec: SubshiftSpec, w: Sequence[int]) -> bool:
    """True iff no basis word occurs in ``w`` (one left-to-right pass)."""
    if spec.basis.words and spec.basis.matcher.first_match(w) is not None:
        return False
    if spec.oracle is not None and len(w) > 0:
        return bool(spec.oracle(tuple(w)))
    return True


def compute_safe_symbol_K(basis: ForbiddenBasis) -> int:
    """One more than the largest symbol in any basis word; 0 for an empty basis."""
    top = basis.max_symbol
    return 0 if top is None else top + 1


def prefix_in_shift(spec: SubshiftSpec, x: PointStream, n: int, use_segments: bool = True) -> bool:
    """True iff ``x_[0,n)`` contains no basis word.

    State is one automaton state, so memory does not grow with ``n``. When
    ``x`` is described by periodic segments, the automaton state inside a
    long segment becomes periodic after ``max_word_length`` symbols and the
    rest of the segment is skipped arithmetically.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if spec.oracle is not None:
        raise ValueError("prefix_in_shift needs a finite basis; oracle specs cannot be streamed")
    if not spec.basis.words or n == 0:
        return True
    ac = spec.basis.matcher
    if use_segments and x.exact_segments:
        return _segments_free(ac, x, n)
    state = 0
    for lo in range(0, n, _STREAM_CHUNK):
        chunk = x.symbols(lo, min(lo + _STREAM_CHUNK, n)).tolist()
        state, hit = ac.feed(chunk, state)
        if hit is not None:
            return False
    return True


def _segments_free(ac: AhoCorasick, x: PointStream, n: int) -> bool:
    state = 0
    lead = ac.max_length
    for seg in x.segments(0):
        stop = n if seg.stop is None else min(seg.stop, n)
        length = stop - seg.start
        period = len(seg.word)
        head = min(length, lead + period)
        seen = []
        for k in range(head):
            state = ac.step(state, seg.at(seg.start + k))
            if ac.match[state]:
                return False
            if k >= lead:
                seen.append(state)
        if length > head:
            # offsets >= lead repeat the states recorded for [lead, lead + period)
            state = seen[(length - 1 - lead) % period]
        if stop >= n:
            return True
    return True


class Gluing(enum.Enum):
    HOLDS = "holds"
    VIOLATED = "violated"
    INAPPLICABLE = "inapplicable"


def verify_gluing_instance(spec: SubshiftSpec, a: Sequence[int], b: Sequence[int], c: Sequence[int]) -> Gluing:
    """Test one instance of the gluing property for the spec's declared ``N``."""
    if spec.gluing_constant_N is None:
        raise ValueError("spec declares no gluing constant N")
    a, b, c = tuple(a), tuple(b), tuple(c)
    if len(b) < spec.gluing_constant_N or not is_allowed(spec, a + b) or not is_allowed(spec, b + c):
        return Gluing.INAPPLICABLE
    return Gluing.HOLDS if is_allowed(spec, a + b + c) else Gluing.VIOLATED


def enumerate_allowed_words(spec: SubshiftSpec, p: int) -> Iterator[Word]:
    """All allowed words of length ``p``, ordered by largest symbol, then lexicographically.

    The stream is infinite: ``K^p, (K+1)^p, ...`` are always allowed.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    ac = spec.basis.matcher
    for top in itertools.count():
        yield from _dfs(spec, ac, p, top, 0, (), False)


def _dfs(spec, ac, p, top, state, word, has_top):
    if len(word) == p:
        if has_top and (spec.oracle is None or spec.oracle(word)):
            yield word
        return
    if not has_top and len(word) == p - 1:
        candidates: Iterable[int] = (top,)
    else:
        candidates = range(top + 1)
    for sym in candidates:
        nxt = ac.step(state, sym)
        if ac.match[nxt]:
            continue
        yield from _dfs(spec, ac, p, top, nxt, word + (sym,), has_top or sym == top)


class _WordCounter:
    """Counts basis-avoiding words by dynamic programming over the automaton."""

    def __init__(self, ac: AhoCorasick):
        self.ac = ac
        self.count = lru_cache(maxsize=None)(self._count)

    def _count(self, state: int, rem: int, top: int) -> int:
        # words of length rem over {0..top} that never reach a match state
        if top < 0:
            return 1 if rem == 0 else 0
        if rem == 0:
            return 1
        ac = self.ac
        total = 0
        outside = top + 1
        for sym in ac.alphabet:
            if sym <= top:
                outside -= 1
                nxt = ac.step(state, sym)
                if not ac.match[nxt]:
                    total += self.count(nxt, rem - 1, top)
        if outside:
            total += outside * self.count(0, rem - 1, top)
        return total

    def with_top(self, state: int, rem: int, top: int, has_top: bool) -> int:
        if has_top:
            return self.count(state, rem, top)
        return self.count(state, rem, top) - self.count(state, rem, top - 1)


@lru_cache(maxsize=64)
def _counter(basis: ForbiddenBasis) -> _WordCounter:
    return _WordCounter(basis.matcher)


def allowed_word(spec: SubshiftSpec, p: int, g: int) -> Word:
    """The ``g``-th word (0-based) of :func:`enumerate_allowed_words`, computed by unranking."""
    if spec.oracle is not None:
        return next(itertools.islice(enumerate_allowed_words(spec, p), g, None))
    if p < 1 or g < 0:
        raise ValueError("need p >= 1 and g >= 0")
    wc = _counter(spec.basis)
    top = 0
    while True:
        block = wc.with_top(0, p, top, False)
        if g < block:
            break
        g -= block
        top += 1
    ac, state, word, has_top = wc.ac, 0, [], False
    for pos in range(p):
        for sym in range(top + 1):
            nxt = ac.step(state, sym)
            if ac.match[nxt]:
                continue
            c = wc.with_top(nxt, p - pos - 1, top, has_top or sym == top)
            if g < c:
                break
            g -= c
        word.append(sym)
        state, has_top = nxt, has_top or sym == top
    return tuple(word)


def allowed_word_index(spec: SubshiftSpec, w: Sequence[int]) -> int:
    """Position ``g`` of an allowed word in the canonical enumeration."""
    w = tuple(w)
    if not w or not is_allowed(spec, w):
        raise ValueError(f"{w} is not a nonempty allowed word")
    if spec.oracle is not None:
        for g, v in enumerate(enumerate_allowed_words(spec, len(w))):
            if v == w:
                return g
    wc, ac = _counter(spec.basis), spec.basis.matcher
    p, top = len(w), max(w)
    g = sum(wc.with_top(0, p, k, False) for k in range(top))
    state, has_top = 0, False
    for pos, target in enumerate(w):
        for sym in range(target):
            nxt = ac.step(state, sym)
            if not ac.match[nxt]:
                g += wc.with_top(nxt, p - pos - 1, top, has_top or sym == top)
        state, has_top = ac.step(state, target), has_top or target == top
    return g


def read_basis(source: str | Path, description: str | None = None) -> SubshiftSpec:
    """Parse a basis file: one forbidden word per line, optional ``N <natural>`` header."""
    name = str(source)
    words: list[Word] = []
    N: int | None = None
    with open(source) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if tokens[0] == "N":
                if N is not None or words:
                    raise FormatError("N header must appear once, before any word", lineno, name)
                if len(tokens) != 2 or not tokens[1].isdigit():
                    raise FormatError("expected 'N <natural>'", lineno, name)
                N = int(tokens[1])
                continue
            bad = [t for t in tokens if not t.isdigit()]
            if bad:
                raise FormatError(f"expected natural numbers, got {bad[0]!r}", lineno, name)
            words.append(tuple(int(t) for t in tokens))
    return SubshiftSpec(ForbiddenBasis(tuple(words)), N, description if description is not None else name)


def write_basis(path: str | Path, spec: SubshiftSpec) -> None:
    with open(path, "w") as fh:
        if spec.gluing_constant_N is not None:
            fh.write(f"N {spec.gluing_constant_N}\n")
        for w in spec.basis.words:
            fh.write(" ".join(map(str, w)) + "\n")
