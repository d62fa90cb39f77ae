"""Exact counts of the agreement statistic ξ(x, y, 2^-t, n).

Two engines compute the same number:

``stream``
    One left-to-right pass over ``n + t - 1`` symbols of each point in
    numpy chunks, tracking the current run of agreeing positions. Works
    for any point; cost is linear in ``n``.
``segment``
    For points described by periodic segments. Inside a stretch where both
    points are periodic, the agreement pattern is periodic with period
    ``lcm`` of the two word lengths, so runs are counted arithmetically.
    Cost depends on the number of segments, not on ``n``, which is what
    makes checkpoints at lengths like 2^90 reachable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .points import PointStream, aligned_segments

STREAM_CHUNK = 1 << 22
DEFAULT_BUDGET = 200_000_000

WINDOW = "window"
STRICT = "strict"


class BudgetExceeded(RuntimeError):
    def __init__(self, needed: int, budget: int):
        self.needed = needed
        self.budget = budget
        super().__init__(f"needs {needed} symbols per stream, budget is {budget}")


@dataclass(frozen=True)
class XiQuery:
    """Count ``i < n`` whose length-``window_t`` windows agree.

    ``window`` mode is the closed condition ``d <= 2^-t``; ``strict`` mode is
    ``d < 2^-t``, the same as ``window`` mode with ``t + 1``.
    """

    window_t: int
    n: int
    predicate_mode: str = WINDOW

    def __post_init__(self):
        if self.window_t < 0 or self.n < 0:
            raise ValueError("window_t and n must be >= 0")
        if self.predicate_mode not in (WINDOW, STRICT):
            raise ValueError(f"unknown predicate mode {self.predicate_mode!r}")

    @property
    def effective_window(self) -> int:
        return self.window_t + 1 if self.predicate_mode == STRICT else self.window_t


def _pick_engine(x: PointStream, y: PointStream, engine: str) -> str:
    if engine == "auto":
        return "segment" if x.exact_segments and y.exact_segments else "stream"
    if engine not in ("stream", "segment"):
        raise ValueError(f"unknown engine {engine!r}")
    if engine == "segment" and not (x.exact_segments and y.exact_segments):
        raise ValueError("segment engine needs points with exact segment structure")
    return engine


def stream_counts(
    x: PointStream, y: PointStream, t: int, ns: Sequence[int],
    budget: int | None = None, chunk: int = STREAM_CHUNK,
) -> list[int]:
    """Counts for every ``n`` in ``ns`` from a single pass."""
    if t == 0:
        return [int(n) for n in ns]
    order = sorted(range(len(ns)), key=lambda k: ns[k])
    total = max(ns, default=0) + t - 1 if ns and max(ns) > 0 else 0
    if budget is not None and total > budget:
        raise BudgetExceeded(total, budget)
    out = [0] * len(ns)
    pending = [(ns[k] + t - 1, k) for k in order if ns[k] > 0]
    acc, pi, last_false = 0, 0, -1
    for lo in range(0, total, chunk):
        hi = min(lo + chunk, total)
        eq = x.symbols(lo, hi) == y.symbols(lo, hi)
        idx = np.arange(lo, hi, dtype=np.int64)
        # index of the latest disagreement at or before each position
        lf = np.maximum.accumulate(np.where(eq, last_false, idx))
        good = (idx - lf) >= t  # window ending here agrees throughout
        while pi < len(pending) and pending[pi][0] <= hi:
            end, k = pending[pi]
            out[k] = acc + int(np.count_nonzero(good[: end - lo]))
            pi += 1
        acc += int(np.count_nonzero(good))
        last_false = int(lf[-1])
    return out


def segment_count(x: PointStream, y: PointStream, t: int, n: int) -> int:
    if t == 0 or n == 0:
        return n
    end = n + t - 1
    total = 0
    run: int | None = None  # start of the currently open run of agreement

    def close(at: int) -> None:
        nonlocal total, run
        if run is not None:
            total += max(0, at - run - t + 1)
            run = None

    for sx, sy in aligned_segments(x, y, 0, end):
        lo, hi = sx.start, sx.stop
        length = hi - lo
        period = math.lcm(len(sx.word), len(sy.word))
        span = min(period, length)
        eq = sx.symbols(lo, lo + span) == sy.symbols(lo, lo + span)
        F = [int(f) for f in np.flatnonzero(~eq)]
        if not F:
            if run is None:
                run = lo
            continue
        if span == length:
            first, last = lo + F[0], lo + F[-1]
            middle = sum(max(0, b - a - t) for a, b in zip(F, F[1:]))
        else:
            q, rem = divmod(length, period)
            tail = [f for f in F if f < rem]
            n_false = q * len(F) + len(tail)
            first = lo + F[0]
            last = lo + q * period + tail[-1] if tail else lo + (q - 1) * period + F[-1]
            gaps = [b - a - 1 for a, b in zip(F, F[1:])] + [F[0] + period - F[-1] - 1]
            contrib = [max(0, g - t + 1) for g in gaps]
            full, part = divmod(n_false - 1, len(F))
            middle = full * sum(contrib) + sum(contrib[:part])
        if run is None and first > lo:
            run = lo
        close(first)
        total += middle
        if last + 1 < hi:
            run = last + 1
    close(end)
    return total


def xi_count(
    x: PointStream, y: PointStream, query: XiQuery,
    engine: str = "auto", budget: int | None = None,
) -> int:
    """Exact ξ count for ``query``; see the module docstring for engines."""
    t = query.effective_window
    if _pick_engine(x, y, engine) == "segment":
        return segment_count(x, y, t, query.n)
    return stream_counts(x, y, t, [query.n], budget=budget)[0]


def xi_ratio(count: int, n: int) -> Fraction:
    if n <= 0:
        raise ValueError("n must be >= 1")
    return Fraction(count, n)


@dataclass(frozen=True)
class XiTrajectory:
    window_t: int
    predicate_mode: str
    points: tuple[tuple[int, int, Fraction], ...] = field(default=())


def xi_trajectory(
    x: PointStream, y: PointStream, window_t: int, ns: Iterable[int],
    predicate_mode: str = WINDOW, engine: str = "auto", budget: int | None = None,
) -> XiTrajectory:
    ns = sorted(set(int(n) for n in ns if n > 0))
    t = XiQuery(window_t, 0, predicate_mode).effective_window
    if _pick_engine(x, y, engine) == "segment":
        counts = [segment_count(x, y, t, n) for n in ns]
    else:
        counts = stream_counts(x, y, t, ns, budget=budget)
    return XiTrajectory(window_t, predicate_mode,
                        tuple((n, c, xi_ratio(c, n)) for n, c in zip(ns, counts)))
