"""Explicit scrambled points: the hat encoding and the three block constructions.

Every constructed point is a :class:`ScrambledPoint`: a short head word
followed by blocks ``0, 1, 2, ...``, block ``j`` being a periodic word
repeated to fill ``block_length(j)`` symbols. Which word fills block ``j`` is
read off a *slot label* stream, itself a hat encoding: for the cylinder and
dense constructions the label is the symbol ``x̂_j``, for the bounded-type
construction it is either a selector bit or the marker for an ``a`` slot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import isqrt
from pathlib import Path
from typing import Callable, Iterator, Sequence

from .matching import AhoCorasick
from .points import (
    ConstantPoint,
    FormatError,
    PeriodicPoint,
    PointStream,
    Segment,
    Word,
    first_difference,
    parse_word,
)
from .schedule import Schedule, make_schedule
from .subshift import (
    SubshiftSpec,
    allowed_word,
    compute_safe_symbol_K,
    is_allowed,
)

# Base points are infinite; membership/non-constancy is checked on this prefix.
BASE_CHECK = 4096


def hat_block_start(k: int) -> int:
    """Index where block ``k`` (``x_0 ... x_k K``) of a hat encoding begins."""
    return k * (k + 3) // 2


def hat_locate(i: int) -> tuple[int, int]:
    """``(block, offset)`` of hat index ``i``; ``offset == block + 1`` is the safe symbol."""
    k = (isqrt(9 + 8 * i) - 3) // 2
    while hat_block_start(k + 1) <= i:
        k += 1
    while hat_block_start(k) > i:
        k -= 1
    return k, i - hat_block_start(k)


def hat_source(i: int) -> int | None:
    """Base index copied to hat index ``i``, or ``None`` where the safe symbol sits."""
    k, off = hat_locate(i)
    return None if off == k + 1 else off


def safe_positions(count: int) -> list[int]:
    return [(k + 1) * (k + 4) // 2 - 1 for k in range(count)]


@dataclass(frozen=True)
class HatPoint(PointStream):
    """``x_0 K x_0 x_1 K x_0 x_1 x_2 K ...`` with random access."""

    base: PointStream
    K: int
    kind = "hat"

    def symbol_at(self, i: int) -> int:
        src = hat_source(i)
        return self.K if src is None else self.base.symbol_at(src)


def hat_encode(x: PointStream, K: int) -> HatPoint:
    return HatPoint(x, K)


@dataclass(frozen=True, eq=False)
class ScrambledPoint(PointStream):
    """``head`` followed by schedule-sized blocks of periodic words.

    Block ``j`` occupies ``[origin + m_{j-1}, origin + m_j)`` and repeats
    ``block_word(labels[j])``. ``origin`` is also the offset the checkpoint
    inequalities add to ``m``: 0 for the cylinder and bounded-type
    constructions, ``p + 1`` for the dense family.
    """

    variant: str
    head: Word
    schedule: Schedule
    origin: int
    labels: HatPoint
    block_word: Callable[[int], Word] = field(repr=False)
    meta: dict = field(default_factory=dict, repr=False)
    kind = "encoded-scrambled"
    exact_segments = True

    def __post_init__(self):
        if self.origin + self.schedule.m(-1) != len(self.head):
            raise ValueError("head length does not match the schedule")

    def block_start(self, j: int) -> int:
        return self.origin + self.schedule.m(j - 1)

    def block_end(self, j: int) -> int:
        return self.origin + self.schedule.m(j)

    def word_of_block(self, j: int) -> Word:
        return self.block_word(self.labels.symbol_at(j))

    def block_of(self, i: int) -> int:
        return self.schedule.block_of(i - self.origin)

    def symbol_at(self, i: int) -> int:
        if i < len(self.head):
            return self.head[i]
        j = self.block_of(i)
        word = self.word_of_block(j)
        return word[(i - self.block_start(j)) % len(word)]

    def segments(self, start: int = 0) -> Iterator[Segment]:
        n = len(self.head)
        if start < n:
            yield Segment(start, n, self.head, start)
            j = 0
        else:
            j = self.block_of(start)
        while True:
            lo = self.block_start(j)
            yield Segment(lo, self.block_end(j), self.word_of_block(j), 0).clip(start)
            j += 1


def _check_base(base: PointStream, alphabet: set[int], need_both: bool) -> None:
    seen = set()
    for i, s in enumerate(base.symbols(0, BASE_CHECK).tolist()):
        if s not in alphabet:
            raise ValueError(f"base symbol {s} at index {i} is outside {sorted(alphabet)}")
        seen.add(s)
    if need_both and seen != alphabet:
        raise ValueError(f"base looks constant: only {sorted(seen)} in the first {BASE_CHECK} symbols")


def sft_scrambled_point(spec: SubshiftSpec, w: Sequence[int], x: PointStream, K: int | None = None) -> ScrambledPoint:
    """``w K u(x̂_0,0) u(x̂_1,1) ...`` with ``u(k,j) = k^{s_j}`` on the cylinder schedule."""
    w = tuple(w)
    safe = compute_safe_symbol_K(spec.basis)
    if K is None:
        K = safe
    elif K < safe:
        raise ValueError(f"K={K} is not a safe symbol (need K >= {safe})")
    if not is_allowed(spec, w):
        raise ValueError(f"word {w} is not allowed")
    sched = make_schedule("sft_cylinder", word_length=len(w))
    return ScrambledPoint(
        "sft_cylinder", w + (K,), sched, 0, HatPoint(x, K), lambda s: (s,),
        {"word": w, "K": K, "base": x},
    )


def dense_family_point(spec: SubshiftSpec, p: int, g: int, base: PointStream) -> ScrambledPoint:
    """``w^{p,g} K u(x̂_0,0) u(x̂_1,1) ...`` on the dense schedule, base over ``{r_g, r_g + p}``."""
    if p < 1 or g < 0:
        raise ValueError("need p >= 1 and g >= 0")
    K = compute_safe_symbol_K(spec.basis)
    if K < 1:
        raise ValueError("dense family needs a safe symbol K >= 1 (the empty basis gives K = 0, "
                         "so r_0 = 0 collides with K)")
    r = 2 * (K + g)
    if isinstance(base, ConstantPoint):
        raise ValueError("base must not be a constant stream")
    _check_base(base, {r, r + p}, need_both=True)
    w = allowed_word(spec, p, g)
    sched = make_schedule("dense")
    return ScrambledPoint(
        "dense", w + (K,), sched, p + 1, HatPoint(base, K), lambda s: (s,),
        {"word": w, "K": K, "p": p, "g": g, "r": r, "base": base},
    )


def disagreement_witness(x: PointStream, y: PointStream, cap: int) -> int | None:
    """Least index below ``cap`` where the points differ, or ``None``."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    return first_difference(x, y, 0, cap)


def primitive(word: Sequence[int]) -> bool:
    """A word is primitive iff it occurs in ``ww`` only at offsets 0 and ``|w|``."""
    w = tuple(word)
    if not w:
        return False
    return AhoCorasick([w]).first_match((w + w)[1:-1]) is None


@dataclass(frozen=True)
class SBTSeedData:
    z: PeriodicPoint
    x: PeriodicPoint
    y: PeriodicPoint
    p: int
    q: int
    r: int
    a: Word
    b: Word
    c: Word
    A: int
    B: int
    C: int
    M: int
    K: int
    theta: int
    gluing_words: str  # "verified" or "asserted"

    @property
    def I0(self) -> Word:
        return (self.b + self.a) * self.B

    @property
    def I1(self) -> Word:
        return (self.c + self.a) * self.C


def sbt_seed(spec: SubshiftSpec, z: PeriodicPoint, x: PeriodicPoint, y: PeriodicPoint) -> SBTSeedData:
    """Validate periodic seeds and derive ``a, b, c, A, B, C, M``."""
    K = spec.sbt_constant
    for name, pt in (("z", z), ("x", x), ("y", y)):
        if not isinstance(pt, PeriodicPoint):
            raise TypeError(f"{name} must be a PeriodicPoint")
        if not primitive(pt.word):
            raise ValueError(f"{name}: period word {pt.word} is not primitive, so its period is not prime")
    p, q, r = z.period, x.period, y.period
    if p <= math.factorial(K):
        raise ValueError(f"prime period p={p} must exceed K!={math.factorial(K)}")
    if not p < q < r:
        raise ValueError(f"periods must satisfy p < q < r, got {p}, {q}, {r}")
    a = z.prefix(p)
    if x.prefix(p) != a or y.prefix(p) != a:
        raise ValueError("x and y must agree with z on the first p symbols")
    b, c = x[p:p * q], y[p:p * r]
    if len(b) <= K or len(c) <= K:
        raise ValueError("|b| and |c| must exceed K")
    M = math.lcm(len(a), len(b + a), len(c + a))
    A, B, C = M // len(a), M // len(b + a), M // len(c + a)
    if spec.oracle is None:
        for name, v in (("aba", a + b + a), ("cab", c + a + b), ("cac", c + a + c)):
            if not is_allowed(spec, v):
                raise ValueError(f"gluing word {name} is not allowed")
        status = "verified"
    else:
        status = "asserted"
    I0, I1 = (b + a) * B, (c + a) * C
    theta = next((k for k in range(M) if I0[k] != I1[k]), None)
    if theta is None:
        raise ValueError("(ba)^B and (ca)^C coincide; the seed cannot separate selectors")
    return SBTSeedData(z, x, y, p, q, r, a, b, c, A, B, C, M, K, theta, status)


# Marker label for the ``a`` slots in the selector hat encoding.
A_SLOT = 2


def sbt_scrambled_point(seed: SBTSeedData, alpha: PointStream) -> ScrambledPoint:
    """Blocks ``[α_0] a [α_0 α_1] a ...``: selector slots carry ``(ba)`` or ``(ca)`` runs, ``a`` slots carry ``a`` runs."""
    bad = [s for s in alpha.symbols(0, 64).tolist() if s not in (0, 1)]
    if bad:
        raise ValueError(f"selector stream must be over {{0, 1}}, saw {bad[0]}")
    words = {0: seed.b + seed.a, 1: seed.c + seed.a, A_SLOT: seed.a}
    sched = make_schedule("sbt", M=seed.M)
    return ScrambledPoint("sbt", (), sched, 0, HatPoint(alpha, A_SLOT), words.__getitem__,
                          {"seed": seed, "alpha": alpha})


def checkpoint_indices(
    x: PointStream, y: PointStream, K: int, count: int, cap: int = 1 << 16
) -> tuple[list[int], list[int]]:
    """First ``count`` hat indices where both encodings show ``K`` (ν) and where they differ (μ)."""
    nu = safe_positions(count)
    if disagreement_witness(x, y, cap) is None:
        raise ValueError(f"no disagreement between the bases within {cap} symbols")
    hx, hy = HatPoint(x, K), HatPoint(y, K)
    mu: list[int] = []
    i = 0
    while len(mu) < count:
        src = hat_source(i)
        if src is not None and hx.symbol_at(i) != hy.symbol_at(i):
            mu.append(i)
        i += 1
    return nu, mu


def read_seed_config(path: str | Path) -> dict:
    """Parse a seed configuration.

    Lines are ``z|x|y <symbols>`` for the periodic words and
    ``alpha|beta pattern <bits>`` or ``alpha|beta random <u64>`` for selectors.
    """
    name = str(path)
    cfg: dict = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, _, rest = line.partition(" ")
            if key in ("z", "x", "y"):
                try:
                    word = parse_word(rest)
                except FormatError as exc:
                    raise FormatError(str(exc), lineno, name) from None
                if not word:
                    raise FormatError(f"{key} needs a nonempty word", lineno, name)
                cfg[key] = PeriodicPoint(word)
            elif key in ("alpha", "beta"):
                mode, _, arg = rest.strip().partition(" ")
                if mode == "pattern":
                    bits = parse_word(arg)
                    if not bits or any(b not in (0, 1) for b in bits):
                        raise FormatError("pattern needs a nonempty 0/1 word", lineno, name)
                    cfg[key] = ("pattern", bits)
                elif mode == "random":
                    if not arg.strip().isdigit() or int(arg) >= 2**64:
                        raise FormatError("random needs a 64-bit seed", lineno, name)
                    cfg[key] = ("random", int(arg))
                else:
                    raise FormatError(f"unknown selector mode {mode!r}", lineno, name)
            else:
                raise FormatError(f"unknown key {key!r}", lineno, name)
    missing = {"z", "x", "y"} - cfg.keys()
    if missing:
        raise FormatError(f"missing {sorted(missing)}", source=name)
    return cfg
