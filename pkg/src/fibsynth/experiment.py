"""Batch compiles over an angle/epsilon grid, written as CSV."""

from __future__ import annotations

import csv
import io
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .approx import compile_rz, compile_rzx
from .circuit import format_decimal
from .precision import context, log10_inv, working_bits  # noqa: F401  (log10_inv re-exported)
from .rng import child_rng

HEADER = [
    "row_type",
    "kind",
    "index",
    "angle",
    "epsilon",
    "sigma_count",
    "trials",
    "distance",
    "ms",
    "mean_sigma",
    "min_sigma",
    "max_sigma",
    "mean_trials",
]

@dataclass(frozen=True)
class Grid:
    """Angles ``2 pi k / denominator`` for ``k`` in ``k_values``, at each epsilon.

    The default denominator 4000 matches the large Rz sweep; ``k_values`` is
    cut down to desk scale by the caller.
    """

    kind: str = "rz"
    k_values: tuple[int, ...] = ()
    denominator: int = 4000
    epsilons: tuple[str, ...] = ()
    repetitions: int = 1
    seed: int = 0
    oracle_depth: Optional[int] = 12
    timing: bool = True

    def runs(self) -> list[tuple[int, str, int]]:
        """``(index, eps, k)`` in output order."""
        out = []
        for eps in self.epsilons:
            for k in self.k_values:
                for _ in range(self.repetitions):
                    out.append((len(out), eps, k))
        return out

@dataclass
class RunRow:
    kind: str
    index: int
    angle: str
    epsilon: str
    sigma_count: int
    trials: int
    distance: str
    ms: int

_WORKER_DB = {}

def _oracle(depth: Optional[int]):
    if depth is None:
        return None
    if depth not in _WORKER_DB:
        from .oracle import build_database

        _WORKER_DB[depth] = build_database(depth, budget=max(depth, 12))
    return _WORKER_DB[depth]

def _one(args) -> RunRow:
    grid, index, eps, k = args
    ctx = context(256)
    angle = 2 * ctx.pi * k / grid.denominator
    fn = compile_rz if grid.kind == "rz" else compile_rzx
    res = fn(angle, context(working_bits(eps)).mpf(eps), child_rng(grid.seed, index), db=_oracle(grid.oracle_depth))
    return RunRow(
        grid.kind,
        index,
        f"2pi*{k}/{grid.denominator}",
        eps,
        res.sigma_count,
        res.trials,
        format_decimal(res.achieved_distance, 6),
        res.elapsed_ms if grid.timing else 0,
    )

def run_grid(grid: Grid, workers: int = 1) -> list[RunRow]:
    """Run every grid point; row order never depends on ``workers``.

    Workers are processes, not threads: the work is pure-Python big-integer
    arithmetic, which threads would serialize.
    """
    jobs = [(grid, i, eps, k) for i, eps, k in grid.runs()]
    if workers <= 1 or len(jobs) <= 1:
        return [_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_one, jobs))

@dataclass
class Aggregate:
    kind: str
    epsilon: str
    mean_sigma: float
    min_sigma: int
    max_sigma: int
    mean_trials: float
    runs: int = field(default=0)

def aggregate(rows: list[RunRow]) -> list[Aggregate]:
    by_eps: dict[str, list[RunRow]] = {}
    for r in rows:
        by_eps.setdefault(r.epsilon, []).append(r)
    out = []
    for eps, rs in by_eps.items():
        sig = [r.sigma_count for r in rs]
        out.append(
            Aggregate(
                rs[0].kind,
                eps,
                statistics.fmean(sig),
                min(sig),
                max(sig),
                statistics.fmean(r.trials for r in rs),
                len(rs),
            )
        )
    return out

def to_csv(rows: list[RunRow], aggs: list[Aggregate]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(HEADER)
    for r in rows:
        w.writerow(["run", r.kind, r.index, r.angle, r.epsilon, r.sigma_count, r.trials, r.distance, r.ms, "", "", "", ""])
    for a in aggs:
        w.writerow(
            ["aggregate", a.kind, "", "", a.epsilon, "", "", "", "", f"{a.mean_sigma:.3f}", a.min_sigma, a.max_sigma, f"{a.mean_trials:.3f}"]
        )
    return buf.getvalue()

def run_experiment(grid: Grid, workers: int = 1) -> str:
    rows = run_grid(grid, workers)
    return to_csv(rows, aggregate(rows))

def linear_fit(xs: list[float], ys: list[float]) -> tuple[float, float]:
    """Least squares ``y = slope * x + intercept``; returns ``(slope, intercept)``."""
    mx, my = statistics.fmean(xs), statistics.fmean(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx
    return slope, my - slope * mx

