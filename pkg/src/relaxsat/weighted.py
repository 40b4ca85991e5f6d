"""Occurrence-weighted variant of the relaxed cost.

Each variable is weighted by how often it occurs, normalised to mean one,
and each clause by the summed weight of its variables. Frequently occurring
variables and the clauses containing them then dominate the Newton steps.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .matrix import InstanceMatrix, clause_sums, transpose_diff_product
from .solver import SolveOutcome, SolverConfig, StopHook, TraceHook, run_search


@dataclass(frozen=True, eq=False)
class WeightVectors:
    w_v: np.ndarray      # per variable, mean 1
    w_c: np.ndarray      # per clause
    w_v_raw: np.ndarray  # occurrence counts


def compute_weights(Q: InstanceMatrix) -> WeightVectors:
    raw = Q.occurrences().astype(np.int64)
    total = raw.sum()
    if total == 0:
        raise ValueError("instance has no literal occurrences")
    w_v = raw / (total / Q.n)
    # distinct variables per clause; a tautology x | -x counts x once
    rows = Q.nz_row
    cols = Q.nz_col
    key = rows * Q.n + cols
    _, first = np.unique(key, return_index=True)
    w_c = np.bincount(rows[first], weights=w_v[cols[first]], minlength=Q.m)
    return WeightVectors(w_v=w_v, w_c=w_c, w_v_raw=raw)


def _check(Q: InstanceMatrix, w: WeightVectors):
    if w.w_v.shape != (Q.n,) or w.w_c.shape != (Q.m,):
        raise ValueError("weight vectors do not match the instance dimensions")


def eval_cost_weighted(Q: InstanceMatrix, u, w: WeightVectors, ell: float) -> float:
    _check(Q, w)
    u = np.asarray(u, dtype=np.float64)
    c = clause_sums(Q, u)
    s = w.w_v * u * (1.0 - u)
    return float(np.dot(w.w_c, 1.0 - np.minimum(c, 1.0)) + 0.5 * ell * np.dot(s, s))


def eval_jacobian_weighted(Q: InstanceMatrix, u, w: WeightVectors, ell: float) -> np.ndarray:
    _check(Q, w)
    u = np.asarray(u, dtype=np.float64)
    c = clause_sums(Q, u)
    d = w.w_v * w.w_v * u * (1.0 - u) * (1.0 - 2.0 * u)
    return transpose_diff_product(Q, w.w_c * (c < 1.0)) + ell * d


def _weighted_objective(Q: InstanceMatrix, w: WeightVectors, ell: float):
    wv2 = w.w_v * w.w_v

    def objective(u):
        c = clause_sums(Q, u)
        s = u * (1.0 - u)
        cost = float(np.dot(w.w_c, 1.0 - np.minimum(c, 1.0)) + 0.5 * ell * np.dot(wv2 * s, s))
        jac = transpose_diff_product(Q, w.w_c * (c < 1.0)) + ell * (wv2 * s * (1.0 - 2.0 * u))
        return cost, jac

    return objective


def solve_weighted(Q: InstanceMatrix, config: SolverConfig = SolverConfig(), *,
                   weights: Optional[WeightVectors] = None,
                   should_stop: Optional[StopHook] = None,
                   trace: Optional[TraceHook] = None) -> SolveOutcome:
    """Same search loop as :func:`relaxsat.solver.solve` on the weighted cost.

    Thresholding and the reported error still count falsified clauses
    without weights.
    """
    w = compute_weights(Q) if weights is None else weights
    _check(Q, w)
    return run_search(Q, config, _weighted_objective(Q, w, config.ell),
                      should_stop=should_stop, trace=trace)
