"""Closed-form bounds on the ξ ratio at checkpoints, as exact fractions.

``lower`` bounds hold at block indices where both points carry the same
symbol run (the safe symbol, or an ``a`` slot); ``upper`` bounds hold at
block indices where the runs differ.
"""

from __future__ import annotations

from fractions import Fraction

from .schedule import Schedule


def _need(sched: Schedule, variant: str, j: int) -> None:
    if sched.variant != variant:
        raise ValueError(f"expected a {variant} schedule, got {sched.variant}")
    if j < 1:
        raise ValueError("checkpoint index must be >= 1")


def bound_sft_lower(nu: int, q: int, sched: Schedule) -> Fraction:
    _need(sched, "sft_cylinder", nu)
    return Fraction(2**nu, 2**nu + 1) - Fraction(q + 1, sched.m(nu))


def bound_sft_upper(mu: int, w_len: int, sched: Schedule) -> Fraction:
    _need(sched, "sft_cylinder", mu)
    return Fraction(1, 1 + 2**mu) + Fraction(1 + w_len, sched.m(mu))


def bound_dense_lower(nu: int, t: int, p: int, a_shift: int, sched: Schedule) -> Fraction:
    _need(sched, "dense", nu)
    denom = 1 + 2**nu + Fraction(p + 1, sched.m(nu - 1))
    return 2**nu / denom - Fraction(t + 1 + a_shift, p + 1 + sched.m(nu))


def bound_dense_upper(mu: int, p: int, a_shift: int, sched: Schedule) -> Fraction:
    _need(sched, "dense", mu)
    denom = 1 + 2**mu + Fraction(p + 1, sched.m(mu - 1))
    return 1 / denom + Fraction(a_shift + p + 1, p + 1 + sched.m(mu))


def bound_sbt_lower(nu: int, R: int, sched: Schedule) -> Fraction:
    _need(sched, "sbt", nu)
    big = 2**nu * sched.M**2
    return Fraction(big, 1 + big) - Fraction(R + 1, sched.m(nu))


def bound_sbt_upper(mu: int, sched: Schedule) -> Fraction:
    _need(sched, "sbt", mu)
    return Fraction(1, 1 + 2**mu) + Fraction(sched.M, sched.m(mu))
