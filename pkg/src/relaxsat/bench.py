"""Benchmark records, CSV output and per-group timing summaries."""
from __future__ import annotations

import csv
import io
import statistics
from dataclasses import dataclass, fields, replace
from typing import Iterable, Sequence

from .matrix import InstanceMatrix
from .solver import SolveOutcome, SolverConfig, solve_portfolio

CSV_COLUMNS = ("instance_id", "n", "m", "weighted", "seed", "status", "error",
               "tries_used", "iterations_total", "wall_time_seconds")


@dataclass(frozen=True)
class BenchRecord:
    instance_id: str
    n: int
    m: int
    weighted: bool
    seed: int
    status: str
    error: int
    tries_used: int
    iterations_total: int
    wall_time_seconds: float

    def __post_init__(self):
        if self.status == "Satisfied" and self.error != 0:
            raise ValueError("a satisfied record must have error 0")

    @classmethod
    def from_outcome(cls, instance_id: str, Q: InstanceMatrix, weighted: bool, seed: int,
                     outcome: SolveOutcome) -> "BenchRecord":
        return cls(instance_id, Q.n, Q.m, weighted, seed, outcome.status.value, outcome.error,
                   outcome.tries_used, outcome.iterations_total, outcome.wall_time)


assert tuple(f.name for f in fields(BenchRecord)) == CSV_COLUMNS


def run_trials(instance_id: str, Q: InstanceMatrix, config: SolverConfig, trials: int,
               weighted: bool = False, jobs: int = 1) -> list[BenchRecord]:
    """``trials`` solves of one instance; trial t uses seed ``config.seed + t``."""
    records = []
    for t in range(trials):
        seed = config.seed + t
        out = solve_portfolio(Q, replace(config, seed=seed), jobs=jobs, weighted=weighted)
        records.append(BenchRecord.from_outcome(instance_id, Q, weighted, seed, out))
    return records


def records_to_csv(records: Iterable[BenchRecord], timing: bool = True) -> str:
    """Render records; with ``timing=False`` the time column is written as 0
    so that repeated runs produce identical bytes."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow([r.instance_id, r.n, r.m, int(r.weighted), r.seed, r.status, r.error,
                         r.tries_used, r.iterations_total,
                         f"{r.wall_time_seconds:.6f}" if timing else "0"])
    return buf.getvalue()


def read_csv(text: str) -> list[BenchRecord]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {header}")
    out = []
    for row in reader:
        if len(row) != len(CSV_COLUMNS):
            raise ValueError(f"row has {len(row)} fields: {row}")
        out.append(BenchRecord(row[0], int(row[1]), int(row[2]), row[3] == "1", int(row[4]),
                               row[5], int(row[6]), int(row[7]), int(row[8]), float(row[9])))
    return out


@dataclass(frozen=True)
class GroupSummary:
    n: int
    m: int
    weighted: bool
    instances: int
    trials: int
    solve_rate: float
    mean_time: float
    std_time: float  # sample standard deviation, 0 for a single trial
    mean_iterations: float


def summarize(records: Sequence[BenchRecord]) -> list[GroupSummary]:
    groups: dict[tuple, list[BenchRecord]] = {}
    for r in records:
        groups.setdefault((r.n, r.m, r.weighted), []).append(r)
    out = []
    for (n, m, weighted), rs in sorted(groups.items()):
        times = [r.wall_time_seconds for r in rs]
        out.append(GroupSummary(
            n=n, m=m, weighted=weighted,
            instances=len({r.instance_id for r in rs}),
            trials=len(rs),
            solve_rate=sum(r.status == "Satisfied" for r in rs) / len(rs),
            mean_time=statistics.fmean(times),
            std_time=statistics.stdev(times) if len(times) > 1 else 0.0,
            mean_iterations=statistics.fmean(r.iterations_total for r in rs),
        ))
    return out


def format_summary(summary: Sequence[GroupSummary]) -> str:
    lines = ["n,m,weighted,instances,trials,solve_rate,mean_time_s,std_time_s,mean_iterations"]
    for g in summary:
        lines.append(f"{g.n},{g.m},{int(g.weighted)},{g.instances},{g.trials},{g.solve_rate:.4f},"
                     f"{g.mean_time:.4f},{g.std_time:.4f},{g.mean_iterations:.1f}")
    return "\n".join(lines) + "\n"
