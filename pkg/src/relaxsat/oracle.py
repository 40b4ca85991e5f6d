"""Exhaustive reference answers for small formulas, plus numeric gradients.

Nothing here touches the instance matrix; clauses are evaluated literal by
literal so the results can be used to check the matrix-based code.
Assignments are enumerated as integers 0 .. 2^n - 1 with variable 1 as the
most significant bit, which is lexicographic order on ``[u_1, ..., u_n]``.
"""
from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from .cnf import CnfInstance

MAX_VARS = 26
_CHUNK = 1 << 16


class OracleLimitError(ValueError):
    pass


def _check_cap(cnf: CnfInstance):
    if cnf.num_vars > MAX_VARS:
        raise OracleLimitError(f"n={cnf.num_vars} exceeds the exhaustive cap of {MAX_VARS}")


def _bits(start: int, stop: int, n: int) -> np.ndarray:
    codes = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((codes[:, None] >> shifts) & 1).astype(np.int8)


def unsat_counts(cnf: CnfInstance, start: int, stop: int) -> np.ndarray:
    """Falsified-clause count for each assignment code in ``[start, stop)``."""
    bits = _bits(start, stop, cnf.num_vars)
    counts = np.zeros(stop - start, dtype=np.int64)
    for clause in cnf.clauses:
        sat = np.zeros(stop - start, dtype=bool)
        for lit in clause:
            col = bits[:, abs(lit) - 1]
            sat |= (col == 1) if lit > 0 else (col == 0)
        counts += ~sat
    return counts


def assignment_from_code(code: int, n: int) -> np.ndarray:
    return _bits(code, code + 1, n)[0]


def _scan(cnf: CnfInstance, stop_at_zero: bool):
    _check_cap(cnf)
    total = 1 << cnf.num_vars
    best_code, best_err = 0, None
    for start in range(0, total, _CHUNK):
        counts = unsat_counts(cnf, start, min(total, start + _CHUNK))
        i = int(np.argmin(counts))
        if best_err is None or counts[i] < best_err:
            best_code, best_err = start + i, int(counts[i])
        if stop_at_zero and best_err == 0:
            break
    return best_code, best_err


def brute_force_solve(cnf: CnfInstance) -> Optional[np.ndarray]:
    """First satisfying assignment in lexicographic order, or ``None`` if unsatisfiable."""
    code, err = _scan(cnf, stop_at_zero=True)
    return assignment_from_code(code, cnf.num_vars) if err == 0 else None


def brute_force_min_error(cnf: CnfInstance) -> tuple[np.ndarray, int]:
    code, err = _scan(cnf, stop_at_zero=True)
    return assignment_from_code(code, cnf.num_vars), err


def satisfying_codes(cnf: CnfInstance) -> np.ndarray:
    _check_cap(cnf)
    total = 1 << cnf.num_vars
    found = [start + np.flatnonzero(unsat_counts(cnf, start, min(total, start + _CHUNK)) == 0)
             for start in range(0, total, _CHUNK)]
    return np.concatenate(found)


def finite_diff_gradient(f: Callable[[np.ndarray], float], u, h: float = 1e-6) -> np.ndarray:
    """Central differences ``(f(u + h e_j) - f(u - h e_j)) / 2h``."""
    if not h > 0:
        raise ValueError("h must be positive")
    u = np.asarray(u, dtype=np.float64)
    grad = np.empty_like(u)
    x = u.copy()
    for j in range(len(u)):
        x[j] = u[j] + h
        fp = f(x)
        x[j] = u[j] - h
        fm = f(x)
        x[j] = u[j]
        grad[j] = (fp - fm) / (2 * h)
    return grad
