"""Checkpoint verification for pairs of constructed points."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import bounds
from .constructions import ScrambledPoint, checkpoint_indices
from .xi import DEFAULT_BUDGET, WINDOW, BudgetExceeded, XiQuery, segment_count, stream_counts

log = logging.getLogger(__name__)

LOWER = "lower-at-nu"
UPPER = "upper-at-mu"


@dataclass(frozen=True)
class CheckpointReport:
    kind: str
    j: int
    index: int
    n: int
    window: int
    count: int
    computed_ratio: Fraction
    bound: Fraction
    satisfied: bool
    engine: str


class CheckpointBudgetExceeded(BudgetExceeded):
    """Some checkpoints did not fit the streaming budget; the feasible ones are attached."""

    def __init__(self, needed: int, budget: int, largest_feasible_j: int | None, reports: list[CheckpointReport]):
        super().__init__(needed, budget)
        self.largest_feasible_j = largest_feasible_j
        self.reports = reports


def _pair_setup(x: ScrambledPoint, y: ScrambledPoint, variant: str | None):
    if not (isinstance(x, ScrambledPoint) and isinstance(y, ScrambledPoint)):
        raise TypeError("checkpoint_verify needs points built by the constructions module")
    if x.variant != y.variant or (variant is not None and variant != x.variant):
        raise ValueError(f"construction/variant mismatch: {x.variant}, {y.variant}, requested {variant}")
    v = x.variant
    if v == "sft_cylinder" and (x.meta["word"] != y.meta["word"] or x.meta["K"] != y.meta["K"]):
        raise ValueError("cylinder pair must share the word w and the safe symbol K")
    if v == "dense" and x.meta["K"] != y.meta["K"]:
        raise ValueError("dense pair must come from the same subshift")
    if v == "sbt" and x.meta["seed"] != y.meta["seed"]:
        raise ValueError("bounded-type pair must share the seed")
    return v


def checkpoint_verify(
    x: ScrambledPoint,
    y: ScrambledPoint,
    checkpoints: Sequence[int],
    window: int,
    *,
    variant: str | None = None,
    engine: str = "auto",
    budget: int = DEFAULT_BUDGET,
    predicate_mode: str = WINDOW,
    scan_cap: int = 1 << 16,
) -> list[CheckpointReport]:
    """Evaluate the lower (ν) and upper (μ) inequalities at each checkpoint ordinal ``j``.

    ``window`` is the lower-bound window (``q``, ``t`` or ``R`` depending on
    the construction); the upper-bound window is fixed by the construction
    (1, or ``M`` for bounded type). ``engine`` is ``segment`` (exact,
    any length), ``stream`` (linear pass, limited by ``budget`` symbols per
    stream) or ``both`` (segment, cross-checked by streaming where the
    budget allows). ``auto`` means ``segment``.
    """
    v = _pair_setup(x, y, variant)
    if engine == "auto":
        engine = "segment"
    if engine not in ("segment", "stream", "both"):
        raise ValueError(f"unknown engine {engine!r}")
    checkpoints = sorted(set(checkpoints))
    if not checkpoints:
        return []
    count = checkpoints[-1] + 1
    nu, mu = checkpoint_indices(x.labels.base, y.labels.base, x.labels.K, count, cap=scan_cap)
    sched = x.schedule
    origin = max(x.origin, y.origin)

    if v == "sft_cylinder":
        w_len = len(x.meta["word"])
        lower = lambda k: bounds.bound_sft_lower(k, window, sched)
        upper = lambda k: bounds.bound_sft_upper(k, w_len, sched)
        up_window = 1
    elif v == "dense":
        p = max(x.meta["p"], y.meta["p"])
        a = abs(x.meta["p"] - y.meta["p"])
        lower = lambda k: bounds.bound_dense_lower(k, window, p, a, sched)
        upper = lambda k: bounds.bound_dense_upper(k, p, a, sched)
        up_window = 1
    else:
        M = sched.M
        lower = lambda k: bounds.bound_sbt_lower(k, window, sched)
        upper = lambda k: bounds.bound_sbt_upper(k, sched)
        up_window = M

    plan = []  # (kind, j, block index, n, window, bound)
    for j in checkpoints:
        plan.append((LOWER, j, nu[j], origin + sched.m(nu[j]), window, lower(nu[j])))
    for j in checkpoints:
        plan.append((UPPER, j, mu[j], origin + sched.m(mu[j]), up_window, upper(mu[j])))

    counts: dict[tuple[int, int], int] = {}
    streamed: dict[tuple[int, int], int] = {}
    if engine in ("segment", "both"):
        for _, _, _, n, t, _ in plan:
            counts[n, t] = segment_count(x, y, XiQuery(t, n, predicate_mode).effective_window, n)
    if engine in ("stream", "both"):
        for t in sorted({t for *_, t, _ in plan}):
            eff = XiQuery(t, 0, predicate_mode).effective_window
            ns = sorted({n for _, _, _, n, tt, _ in plan if tt == t and n + eff - 1 <= budget})
            for n, c in zip(ns, stream_counts(x, y, eff, ns, budget=budget)):
                streamed[n, t] = c
        if engine == "stream":
            counts = dict(streamed)
        else:
            for key, c in streamed.items():
                if counts[key] != c:
                    raise RuntimeError(f"engines disagree at n={key[0]}, t={key[1]}: "
                                       f"segment {counts[key]}, stream {c}")

    reports = []
    skipped = []
    for kind, j, idx, n, t, bound in plan:
        if (n, t) not in counts:
            skipped.append((j, n))
            continue
        c = counts[n, t]
        ratio = Fraction(c, n)
        ok = ratio >= bound if kind == LOWER else ratio <= bound
        tag = engine
        if engine == "both":
            tag = "segment+stream" if (n, t) in streamed else "segment"
        reports.append(CheckpointReport(kind, j, idx, n, t, c, ratio, bound, ok, tag))
    if skipped:
        done = {r.j for r in reports}
        feasible = [j for j in checkpoints if j in done and all(jj != j for jj, _ in skipped)]
        largest = max(feasible) if feasible else None
        log.warning("streaming budget %d exceeded; largest feasible checkpoint j=%s", budget, largest)
        raise CheckpointBudgetExceeded(max(n for _, n in skipped), budget, largest, reports)
    return reports
