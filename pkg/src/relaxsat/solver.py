"""Newton-iteration SAT search over a continuous relaxation.

The cost of a real vector ``u`` is the number of (fractionally) false clauses,
``sum(1 - min(c, 1))`` with ``c`` the relaxed clause sums, plus a quartic
penalty ``ell/2 * ||u * (1 - u)||^2`` pushing entries to 0/1. Its roots are
exactly the satisfying 0/1 assignments, so the search applies the Newton root
update ``u <- u - cost / ||grad||^2 * grad`` and, after each step, rounds ``u``
at the best threshold on a grid. Stalls are broken by mixing in uniform noise.
"""
from __future__ import annotations

import enum
import math
import threading
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .matrix import InstanceMatrix, clause_extremes, clause_sums, transpose_diff_product

SEED_MASK = (1 << 64) - 1


class Status(str, enum.Enum):
    SATISFIED = "Satisfied"
    EXHAUSTED = "Exhausted"


@dataclass(frozen=True)
class SolverConfig:
    ell: float = 1.0
    beta: float = 0.5
    max_itr: int = 500
    max_try: int = 100
    grid_levels: int = 200
    step_guard: float = 1e-12
    seed: int = 0
    threshold_stride: int = 1
    timeout: Optional[float] = None  # seconds; None means unlimited

    def __post_init__(self):
        if not self.ell > 0:
            raise ValueError(f"ell must be > 0, got {self.ell}")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [0, 1], got {self.beta}")
        for name in ("max_itr", "max_try", "grid_levels", "threshold_stride"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be a positive integer")
        if not self.step_guard > 0:
            raise ValueError("step_guard must be > 0")
        if self.timeout is not None and self.timeout <= 0:
            raise ValueError("timeout must be positive")


@dataclass
class SolveOutcome:
    status: Status
    assignment: np.ndarray
    error: int
    tries_used: int
    iterations_total: int
    wall_time: float
    final_theta: float
    timed_out: bool = False
    seed: int = 0

    @property
    def satisfied(self) -> bool:
        return self.status is Status.SATISFIED

    def same_result(self, other: "SolveOutcome") -> bool:
        """Field-wise equality ignoring wall time."""
        return (self.status == other.status and self.error == other.error
                and self.tries_used == other.tries_used
                and self.iterations_total == other.iterations_total
                and np.array_equal(self.assignment, other.assignment)
                and (self.final_theta == other.final_theta
                     or (math.isnan(self.final_theta) and math.isnan(other.final_theta))))


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 stream for one solve. Draw order: the initial vector, then one
    full-length vector per perturbation, each drawn componentwise in index order."""
    return np.random.Generator(np.random.PCG64(int(seed) & SEED_MASK))


def derive_seed(seed: int, index: int) -> int:
    """Stable child seed; index 0 maps to ``seed`` itself."""
    if index == 0:
        return int(seed) & SEED_MASK
    ss = np.random.SeedSequence([int(seed) & SEED_MASK, index])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _penalty_parts(u):
    s = u * (1.0 - u)
    return s, s * (1.0 - 2.0 * u)


def eval_cost(Q: InstanceMatrix, u, ell: float) -> float:
    u = np.asarray(u, dtype=np.float64)
    c = clause_sums(Q, u)
    s = u * (1.0 - u)
    return float(np.sum(1.0 - np.minimum(c, 1.0)) + 0.5 * ell * np.dot(s, s))


def eval_jacobian(Q: InstanceMatrix, u, ell: float) -> np.ndarray:
    u = np.asarray(u, dtype=np.float64)
    c = clause_sums(Q, u)
    _, d = _penalty_parts(u)
    return transpose_diff_product(Q, (c < 1.0).astype(np.float64)) + ell * d


def _cost_and_jacobian(Q: InstanceMatrix, u: np.ndarray, ell: float):
    c = clause_sums(Q, u)
    s, d = _penalty_parts(u)
    cost = float(np.sum(1.0 - np.minimum(c, 1.0)) + 0.5 * ell * np.dot(s, s))
    jac = transpose_diff_product(Q, (c < 1.0).astype(np.float64)) + ell * d
    return cost, jac


def newton_step(u, cost: float, jacb, guard: float) -> Optional[np.ndarray]:
    """Root-finding step along the gradient. Returns the new point, or ``None``
    when ``||jacb||^2 < guard`` (degenerate: the caller should perturb)."""
    jacb = np.asarray(jacb, dtype=np.float64)
    sq = float(np.dot(jacb, jacb))
    if not sq >= guard:
        return None
    return np.asarray(u, dtype=np.float64) - (cost / sq) * jacb


def count_unsat(Q: InstanceMatrix, u) -> int:
    u = np.asarray(u)
    if u.ndim != 1 or u.shape[0] != Q.n:
        raise ValueError(f"assignment has shape {u.shape}, expected ({Q.n},)")
    return int(np.count_nonzero(clause_sums(Q, u.astype(np.float64)) < 0.5))


def threshold_grid(u, grid_levels: int) -> np.ndarray:
    u = np.asarray(u, dtype=np.float64)
    return np.linspace(u.min(), u.max(), grid_levels)


def threshold_search(Q: InstanceMatrix, u, grid_levels: int):
    """Round ``u`` at the grid threshold that falsifies the fewest clauses.

    Candidates are ``grid_levels`` evenly spaced values over ``[min(u), max(u)]``
    and rounding is ``u >= theta``. Ties go to the smallest threshold. For a
    constant ``u`` only all-ones and all-zeros are compared.

    Returns ``(assignment, theta, error)``.
    """
    u = np.asarray(u, dtype=np.float64)
    lo, hi = float(u.min()), float(u.max())
    if lo == hi:
        ones = np.ones(Q.n, dtype=np.int8)
        zeros = np.zeros(Q.n, dtype=np.int8)
        e1, e0 = count_unsat(Q, ones), count_unsat(Q, zeros)
        if e1 <= e0:
            return ones, lo, e1
        return zeros, float(np.nextafter(lo, np.inf)), e0

    grid = threshold_grid(u, grid_levels)
    # clause i is false at theta iff max_pos[i] < theta <= min_neg[i]
    max_pos, min_neg = clause_extremes(Q, u)
    start = _count_grid_le(grid, max_pos)
    stop = _count_grid_le(grid, min_neg)
    live = start < stop
    diff = np.bincount(start[live], minlength=len(grid) + 1) - np.bincount(stop[live], minlength=len(grid) + 1)
    errors = np.cumsum(diff[:-1])
    best = int(np.argmin(errors))
    theta = float(grid[best])
    return (u >= theta).astype(np.int8), theta, int(errors[best])


def _count_grid_le(grid: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Number of grid points ``<= x`` for an evenly spaced ``grid``.

    Same result as ``np.searchsorted(grid, x, side="right")``: the index is
    estimated arithmetically and then corrected against the actual grid values.
    """
    g = len(grid)
    if g == 1:
        return (grid[0] <= x).astype(np.int64)
    step = (grid[-1] - grid[0]) / (g - 1)
    est = np.floor((x - grid[0]) / step) + 1.0  # +-inf for clauses lacking a polarity
    idx = np.minimum(np.maximum(est, 0.0), g).astype(np.int64)
    padded = np.concatenate(([-np.inf], grid, [np.inf]))
    idx -= padded[idx] > x
    idx += padded[idx + 1] <= x
    return np.minimum(idx, g)


def perturb(u, beta: float, rng: np.random.Generator) -> np.ndarray:
    """Mix ``u`` with fresh U(0,1) noise: ``(1 - beta) * u + beta * noise``."""
    noise = rng.random(len(u))
    return (1.0 - beta) * np.asarray(u, dtype=np.float64) + beta * noise


# Stop hook: called with the running iteration count at iteration boundaries.
StopHook = Callable[[int], bool]
# Trace hook: (iteration, theta, error) after every threshold evaluation.
TraceHook = Callable[[int, float, int], None]


def run_search(Q: InstanceMatrix, config: SolverConfig, objective,
               should_stop: Optional[StopHook] = None,
               trace: Optional[TraceHook] = None) -> SolveOutcome:
    """Restart/iterate loop shared by the plain and weighted solvers.

    ``objective(u)`` must return ``(cost, gradient)``.
    """
    t0 = time.perf_counter()
    deadline = None if config.timeout is None else t0 + config.timeout
    rng = make_rng(config.seed)
    u = rng.random(Q.n)

    best_u, best_theta, best_err = None, math.nan, math.inf
    iterations = 0
    tries = 0
    stopped = timed_out = False

    for _ in range(config.max_try):
        tries += 1
        for q in range(config.max_itr):
            cost, jac = objective(u)
            if cost > 0.0:
                new = newton_step(u, cost, jac, config.step_guard)
                if new is None or not np.all(np.isfinite(new)):
                    new = perturb(u, config.beta, rng)
                u = new
            iterations += 1

            if (q + 1) % config.threshold_stride == 0 or q + 1 == config.max_itr:
                bits, theta, err = threshold_search(Q, u, config.grid_levels)
                if trace is not None:
                    trace(iterations, theta, err)
                if err < best_err:
                    best_u, best_theta, best_err = bits, theta, err
                if err == 0:
                    return SolveOutcome(Status.SATISFIED, bits, 0, tries, iterations,
                                        time.perf_counter() - t0, theta, seed=config.seed)

            if deadline is not None and time.perf_counter() >= deadline:
                stopped = timed_out = True
            elif should_stop is not None and should_stop(iterations):
                stopped = True
            if stopped:
                break
        if stopped:
            break
        u = perturb(u, config.beta, rng)

    return SolveOutcome(Status.EXHAUSTED, best_u, int(best_err), tries, iterations,
                        time.perf_counter() - t0, best_theta, timed_out=timed_out,
                        seed=config.seed)


def solve(Q: InstanceMatrix, config: SolverConfig = SolverConfig(), *,
          should_stop: Optional[StopHook] = None,
          trace: Optional[TraceHook] = None) -> SolveOutcome:
    ell = config.ell
    return run_search(Q, config, lambda u: _cost_and_jacobian(Q, u, ell),
                      should_stop=should_stop, trace=trace)


@dataclass
class _Race:
    lock: threading.Lock = field(default_factory=threading.Lock)
    best_iterations: float = math.inf

    def record(self, outcome: SolveOutcome):
        with self.lock:
            if outcome.satisfied and outcome.iterations_total < self.best_iterations:
                self.best_iterations = outcome.iterations_total

    def beaten(self, iterations: int) -> bool:
        return iterations > self.best_iterations


def solve_portfolio(Q: InstanceMatrix, config: SolverConfig = SolverConfig(), jobs: int = 1,
                    weighted: bool = False) -> SolveOutcome:
    """Run ``jobs`` independently seeded solves on a shared matrix.

    Worker ``j`` uses ``derive_seed(config.seed, j)``. A worker gives up once
    it has spent more iterations than some already-successful worker, so the
    winner (fewest iterations, then lowest worker index) does not depend on
    thread scheduling. Without a success, the lowest error wins.
    """
    from .weighted import solve_weighted

    run = solve_weighted if weighted else solve
    if jobs <= 1:
        return run(Q, config)

    race = _Race()
    results: list[Optional[SolveOutcome]] = [None] * jobs

    def work(j: int):
        cfg = replace(config, seed=derive_seed(config.seed, j))
        out = run(Q, cfg, should_stop=race.beaten)
        race.record(out)
        results[j] = out

    t0 = time.perf_counter()
    threads = [threading.Thread(target=work, args=(j,), daemon=True) for j in range(jobs)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    elapsed = time.perf_counter() - t0

    sat = [r for r in results if r.satisfied]
    if sat:
        winner = min(sat, key=lambda r: r.iterations_total)
    else:
        winner = min(results, key=lambda r: r.error)
    return replace(winner, wall_time=elapsed, timed_out=any(r.timed_out for r in results))
