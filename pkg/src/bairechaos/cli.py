"""Command line front end.

Every command is deterministic given its flags; randomness comes from
``--rng-seed`` only, and that seed is written into every output file.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import bounds
from .constructions import (
    ScrambledPoint,
    dense_family_point,
    disagreement_witness,
    read_seed_config,
    sbt_scrambled_point,
    sbt_seed,
    sft_scrambled_point,
)
from .points import (
    ConstantPoint,
    FormatError,
    PeriodicPoint,
    PointStream,
    format_word,
    load_point,
    parse_word,
    write_prefix,
)
from .rng import random_point
from .schedule import make_schedule
from .subshift import SubshiftSpec, compute_safe_symbol_K, read_basis
from .verify import CheckpointBudgetExceeded, CheckpointReport, checkpoint_verify
from .xi import DEFAULT_BUDGET, STRICT, WINDOW, xi_trajectory

log = logging.getLogger("bairechaos")

COMMANDS = ("gen", "xi", "verify-sft", "verify-dense", "verify-sbt", "lemmas", "bounds")
CSV_COLUMNS = ["n", "count", "ratio_num", "ratio_den", "ratio_float64", "bound_num", "bound_den",
               "kind", "j", "satisfied", "pair", "index", "window"]
PAIR_SCAN_CAP = 1 << 12


@dataclass
class RunConfig:
    command: str
    basis_path: str | None = None
    seed_path: str | None = None
    output_path: str | None = None
    checkpoint_max_j: int = 6
    checkpoint_min_j: int = 3
    window_t: int | None = None
    symbol_budget: int = DEFAULT_BUDGET
    rng_seed: int = 0
    word: str | None = None
    p: int = 1
    g: int = 0
    p2: int | None = None
    g2: int | None = None
    q: int | None = None
    h: int | None = None
    K: int | None = None
    M: int = 1
    trials: int = 1
    n: int = 1000
    kind: str | None = None
    variant: str | None = None
    x_spec: str | None = None
    y_spec: str | None = None
    predicate: str = WINDOW
    engine: str = "auto"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if not 0 <= self.rng_seed < 2**64:
            raise ValueError("rng seed must be a 64-bit natural")


class _Output:
    """Collects CSV text and writes it once, to a file or stdout."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.buf = io.StringIO()

    def metadata(self, **extra) -> None:
        self.buf.write(f"# command={self.cfg.command}\n# rng_seed={self.cfg.rng_seed}\n")
        for k, v in extra.items():
            self.buf.write(f"# {k}={v}\n")

    def close(self) -> None:
        text = self.buf.getvalue()
        if self.cfg.output_path:
            Path(self.cfg.output_path).write_text(text)
        else:
            sys.stdout.write(text)


def _summary(line: str, cfg: RunConfig) -> None:
    print(line, file=sys.stdout if cfg.output_path else sys.stderr)


def _spec(cfg: RunConfig) -> SubshiftSpec:
    if cfg.basis_path is None:
        return SubshiftSpec(description="full shift")
    return read_basis(cfg.basis_path)


def _parse_point(text: str) -> PointStream:
    kind, _, arg = text.partition(":")
    if kind == "const":
        return ConstantPoint(int(arg))
    if kind == "periodic":
        return PeriodicPoint(parse_word(arg))
    if kind == "file":
        return load_point(arg)
    raise ValueError(f"point spec must be const:S, periodic:W or file:PATH, got {text!r}")


def _distinct_pair(cfg: RunConfig, k: int, zero_x: int, one_x: int, zero_y: int, one_y: int):
    x = random_point(cfg.rng_seed, (k, 0), zero_x, one_x)
    attempt = 0
    while True:
        y = random_point(cfg.rng_seed, (k, 1, attempt), zero_y, one_y)
        if disagreement_witness(x, y, PAIR_SCAN_CAP) is not None:
            return x, y
        attempt += 1


def _report_rows(reports: Sequence[CheckpointReport], pair: int) -> list[list]:
    rows = []
    for r in reports:
        rows.append([r.n, r.count, r.computed_ratio.numerator, r.computed_ratio.denominator,
                     repr(float(r.computed_ratio)), r.bound.numerator, r.bound.denominator,
                     r.kind, r.j, int(r.satisfied), pair, r.index, r.window])
    return rows


def _run_pairs(cfg: RunConfig, pairs, window: int, meta: dict) -> int:
    out = _Output(cfg)
    out.metadata(**meta, window=window, checkpoints=f"{cfg.checkpoint_min_j}..{cfg.checkpoint_max_j}",
                 engine=cfg.engine, budget=cfg.symbol_budget, predicate=cfg.predicate)
    writer = csv.writer(out.buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    checkpoints = range(cfg.checkpoint_min_j, cfg.checkpoint_max_j + 1)
    all_ok, total = True, 0
    for k, (x, y) in enumerate(pairs):
        try:
            reports = checkpoint_verify(x, y, checkpoints, window, engine=cfg.engine,
                                        budget=cfg.symbol_budget, predicate_mode=cfg.predicate)
        except CheckpointBudgetExceeded as exc:
            log.warning("pair %d: budget %d exceeded, largest feasible j = %s",
                        k, exc.budget, exc.largest_feasible_j)
            reports = exc.reports
        writer.writerows(_report_rows(reports, k))
        total += len(reports)
        all_ok &= all(r.satisfied for r in reports)
        for r in reports:
            _summary(f"pair {k:3d}  {r.kind:12s} j={r.j:<2d} index={r.index:<4d} "
                     f"ratio={float(r.computed_ratio):.9f} bound={float(r.bound):.9f} "
                     f"{'ok' if r.satisfied else 'FAIL'}", cfg)
    out.close()
    _summary(f"{total} reports, {'all satisfied' if all_ok else 'FAILURES'}", cfg)
    return 0 if all_ok else 1


def _verify_sft(cfg: RunConfig) -> int:
    spec = _spec(cfg)
    w = parse_word(cfg.word or "")
    K = compute_safe_symbol_K(spec.basis)
    q = cfg.q if cfg.q is not None else (cfg.window_t if cfg.window_t is not None else 1)
    pairs = []
    for k in range(cfg.trials):
        bx, by = _distinct_pair(cfg, k, K, K + 1, K, K + 1)
        pairs.append((sft_scrambled_point(spec, w, bx), sft_scrambled_point(spec, w, by)))
    return _run_pairs(cfg, pairs, q, {"variant": "sft_cylinder", "word": format_word(w), "K": K})


def _verify_dense(cfg: RunConfig) -> int:
    spec = _spec(cfg)
    K = compute_safe_symbol_K(spec.basis)
    p1, g1 = cfg.p, cfg.g
    p2 = cfg.p2 if cfg.p2 is not None else p1
    g2 = cfg.g2 if cfg.g2 is not None else g1
    r1, r2 = 2 * (K + g1), 2 * (K + g2)
    t = cfg.window_t if cfg.window_t is not None else 1
    pairs = []
    for k in range(cfg.trials):
        bx, by = _distinct_pair(cfg, k, r1, r1 + p1, r2, r2 + p2)
        pairs.append((dense_family_point(spec, p1, g1, bx), dense_family_point(spec, p2, g2, by)))
    return _run_pairs(cfg, pairs, t, {"variant": "dense", "members": f"({p1},{g1}) ({p2},{g2})", "K": K})


def _selector(cfg: RunConfig, entry, path) -> PointStream:
    if entry is None:
        return random_point(cfg.rng_seed, path, 0, 1)
    mode, arg = entry
    if mode == "pattern":
        return PeriodicPoint(arg)
    return random_point(arg, (), 0, 1)


def _verify_sbt(cfg: RunConfig) -> int:
    spec = _spec(cfg)
    if cfg.seed_path is None:
        raise ValueError("verify-sbt needs --seed-config")
    seeds = read_seed_config(cfg.seed_path)
    seed = sbt_seed(spec, seeds["z"], seeds["x"], seeds["y"])
    R = cfg.window_t if cfg.window_t is not None else 1
    pairs = []
    for k in range(cfg.trials):
        alpha = _selector(cfg, seeds.get("alpha") if k == 0 else None, (k, 0))
        beta = _selector(cfg, seeds.get("beta") if k == 0 else None, (k, 1))
        attempt = 0
        while disagreement_witness(alpha, beta, PAIR_SCAN_CAP) is None:
            attempt += 1
            beta = random_point(cfg.rng_seed, (k, 1, attempt), 0, 1)
        pairs.append((sbt_scrambled_point(seed, alpha), sbt_scrambled_point(seed, beta)))
    meta = {"variant": "sbt", "a": format_word(seed.a), "b": format_word(seed.b), "c": format_word(seed.c),
            "M": seed.M, "A": seed.A, "B": seed.B, "C": seed.C}
    return _run_pairs(cfg, pairs, R, meta)


def _lemmas(cfg: RunConfig) -> int:
    if cfg.K is not None:
        K = cfg.K
    else:
        K = compute_safe_symbol_K(_spec(cfg).basis)
    g = cfg.g
    h = cfg.h if cfg.h is not None else g + 1
    p = cfg.p
    suites = []
    if g != h:
        suites.append(("g!=h", (2 * (K + g), 2 * (K + g) + p), (2 * (K + h), 2 * (K + h) + p)))
    if cfg.q is not None and cfg.q != p:
        q = cfg.q
        suites.append(("p!=q", (2 * (K + g), 2 * (K + g) + p), (2 * (K + h), 2 * (K + h) + q)))
    if not suites:
        raise ValueError("lemmas needs g != h or p != q")
    out = _Output(cfg)
    out.metadata(K=K, g=g, h=h, p=p, q=cfg.q, trials=cfg.trials)
    writer = csv.writer(out.buf, lineterminator="\n")
    writer.writerow(["lemma", "trial", "gamma", "x_gamma", "y_gamma"])
    missing = 0
    for li, (name, ax, ay) in enumerate(suites):
        found = 0
        for k in range(cfg.trials):
            x = random_point(cfg.rng_seed, (li, k, 0), *ax)
            y = random_point(cfg.rng_seed, (li, k, 1), *ay)
            gamma = disagreement_witness(x, y, cfg.n)
            if gamma is None:
                missing += 1
                writer.writerow([name, k, "", "", ""])
            else:
                found += 1
                writer.writerow([name, k, gamma, x.symbol_at(gamma), y.symbol_at(gamma)])
        _summary(f"lemma {name}: {found}/{cfg.trials} witnesses found "
                 f"(x over {set(ax)}, y over {set(ay)})", cfg)
    out.close()
    return 0 if missing == 0 else 1


def _bounds(cfg: RunConfig) -> int:
    variant = cfg.variant or "sft_cylinder"
    out = _Output(cfg)
    writer = csv.writer(out.buf, lineterminator="\n")
    if variant in ("sft", "sft_cylinder"):
        w_len = len(parse_word(cfg.word)) if cfg.word is not None else 1
        q = cfg.q if cfg.q is not None else 1
        sched = make_schedule("sft_cylinder", word_length=w_len)
        lower = lambda j: bounds.bound_sft_lower(j, q, sched)
        upper = lambda j: bounds.bound_sft_upper(j, w_len, sched)
        out.metadata(variant="sft_cylinder", word_length=w_len, q=q)
    elif variant == "dense":
        t = cfg.window_t if cfg.window_t is not None else 1
        a = abs(cfg.p - cfg.p2) if cfg.p2 is not None else 0
        sched = make_schedule("dense")
        lower = lambda j: bounds.bound_dense_lower(j, t, cfg.p, a, sched)
        upper = lambda j: bounds.bound_dense_upper(j, cfg.p, a, sched)
        out.metadata(variant="dense", p=cfg.p, t=t, a_shift=a)
    elif variant == "sbt":
        R = cfg.window_t if cfg.window_t is not None else 1
        sched = make_schedule("sbt", M=cfg.M)
        lower = lambda j: bounds.bound_sbt_lower(j, R, sched)
        upper = lambda j: bounds.bound_sbt_upper(j, sched)
        out.metadata(variant="sbt", M=cfg.M, R=R)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    writer.writerow(["j", "s_j", "m_j", "lower_num", "lower_den", "lower_float64",
                     "upper_num", "upper_den", "upper_float64"])
    for j in range(1, cfg.checkpoint_max_j + 1):
        lo, up = lower(j), upper(j)
        writer.writerow([j, sched.s(j), sched.m(j), lo.numerator, lo.denominator, repr(float(lo)),
                         up.numerator, up.denominator, repr(float(up))])
    out.close()
    return 0


def _gen(cfg: RunConfig) -> int:
    kind = cfg.kind or "sft"
    spec = _spec(cfg)
    K = compute_safe_symbol_K(spec.basis)
    if kind == "sft":
        base = random_point(cfg.rng_seed, (0,), K, K + 1)
        point: PointStream = sft_scrambled_point(spec, parse_word(cfg.word or ""), base)
    elif kind == "dense":
        r = 2 * (K + cfg.g)
        point = dense_family_point(spec, cfg.p, cfg.g, random_point(cfg.rng_seed, (0,), r, r + cfg.p))
    elif kind == "sbt":
        if cfg.seed_path is None:
            raise ValueError("gen --kind sbt needs --seed-config")
        seeds = read_seed_config(cfg.seed_path)
        seed = sbt_seed(spec, seeds["z"], seeds["x"], seeds["y"])
        point = sbt_scrambled_point(seed, _selector(cfg, seeds.get("alpha"), (0,)))
    elif kind == "periodic":
        point = PeriodicPoint(parse_word(cfg.word or ""))
    else:
        raise ValueError(f"unknown kind {kind!r}")
    buf = io.StringIO()
    write_prefix(buf, point.symbols(0, cfg.n).tolist(),
                 [f"kind={kind}", f"rng_seed={cfg.rng_seed}", f"n={cfg.n}"])
    if cfg.output_path:
        Path(cfg.output_path).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return 0


def _xi(cfg: RunConfig) -> int:
    if not (cfg.x_spec and cfg.y_spec):
        raise ValueError("xi needs --x and --y")
    x, y = _parse_point(cfg.x_spec), _parse_point(cfg.y_spec)
    t = cfg.window_t if cfg.window_t is not None else 1
    ns = sorted({min(2**k, cfg.n) for k in range(cfg.n.bit_length() + 1)} | {cfg.n})
    engine = "stream" if cfg.engine == "auto" and cfg.n <= cfg.symbol_budget else cfg.engine
    traj = xi_trajectory(x, y, t, ns, predicate_mode=cfg.predicate, engine=engine,
                         budget=cfg.symbol_budget if engine == "stream" else None)
    out = _Output(cfg)
    out.metadata(x=cfg.x_spec, y=cfg.y_spec, window=t, predicate=cfg.predicate)
    writer = csv.writer(out.buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for n, c, ratio in traj.points:
        writer.writerow([n, c, ratio.numerator, ratio.denominator, repr(float(ratio)),
                         "", "", "trajectory", "", "", "", "", t])
    out.close()
    return 0


_DISPATCH = {
    "gen": _gen,
    "xi": _xi,
    "verify-sft": _verify_sft,
    "verify-dense": _verify_dense,
    "verify-sbt": _verify_sbt,
    "lemmas": _lemmas,
    "bounds": _bounds,
}


def run(config: RunConfig) -> int:
    return _DISPATCH[config.command](config)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bairechaos", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--basis", dest="basis_path", help="forbidden-word basis file")
    ap.add_argument("--seed-config", dest="seed_path", help="periodic seeds / selector file")
    ap.add_argument("--out", dest="output_path", help="output file (default stdout)")
    ap.add_argument("--word", help="allowed word w, e.g. '0 1'")
    ap.add_argument("--p", type=int, default=1)
    ap.add_argument("--g", type=int, default=0)
    ap.add_argument("--p2", type=int, help="second dense member's word length")
    ap.add_argument("--g2", type=int, help="second dense member's enumeration index")
    ap.add_argument("--q", type=int, help="window q (verify-sft, bounds) or second gap (lemmas)")
    ap.add_argument("--h", type=int, help="second family index for lemmas")
    ap.add_argument("--K", type=int, help="safe symbol for lemmas (default from --basis)")
    ap.add_argument("--M", type=int, default=1, help="block length for 'bounds --variant sbt'")
    ap.add_argument("--window", dest="window_t", type=int)
    ap.add_argument("--max-j", dest="checkpoint_max_j", type=int, default=6)
    ap.add_argument("--min-j", dest="checkpoint_min_j", type=int, default=3)
    ap.add_argument("--budget", dest="symbol_budget", type=int, default=DEFAULT_BUDGET)
    ap.add_argument("--trials", type=int, default=1)
    ap.add_argument("--rng-seed", dest="rng_seed", type=int, default=0)
    ap.add_argument("--n", type=int, default=1000, help="prefix length (gen, xi) or scan cap (lemmas)")
    ap.add_argument("--kind", choices=("sft", "dense", "sbt", "periodic"))
    ap.add_argument("--variant", choices=("sft", "sft_cylinder", "dense", "sbt"))
    ap.add_argument("--x", dest="x_spec", help="xi: const:S | periodic:W | file:PATH")
    ap.add_argument("--y", dest="y_spec")
    ap.add_argument("--predicate", choices=(WINDOW, STRICT), default=WINDOW)
    ap.add_argument("--engine", choices=("auto", "segment", "stream", "both"), default="auto")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = vars(build_parser().parse_args(argv))
    verbose = args.pop("verbose")
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return run(RunConfig(**args))
    except (FormatError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
