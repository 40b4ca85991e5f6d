"""Sparse instance matrix with the two products the Newton iteration needs.

The m x 2n clause/literal incidence matrix is split into its positive half
(``P``) and negative half (``N``). Only the nonzeros are stored, once in
row-major order (per clause) and once in column-major order (per variable).
All indices are 0-based here.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .cnf import CnfInstance, EmptyClauseError


def _csr(pairs_major: np.ndarray, pairs_minor: np.ndarray, size: int):
    order = np.lexsort((pairs_minor, pairs_major))
    major, minor = pairs_major[order], pairs_minor[order]
    indptr = np.zeros(size + 1, dtype=np.int64)
    np.cumsum(np.bincount(major, minlength=size), out=indptr[1:])
    return indptr, minor.astype(np.int64)


@dataclass(frozen=True, eq=False)
class InstanceMatrix:
    m: int
    n: int
    # row views: clause i -> variables, sorted
    pos_indptr: np.ndarray
    pos_indices: np.ndarray
    neg_indptr: np.ndarray
    neg_indices: np.ndarray
    # column views: variable j -> clauses, sorted
    colpos_indptr: np.ndarray
    colpos_indices: np.ndarray
    colneg_indptr: np.ndarray
    colneg_indices: np.ndarray
    neg_count: np.ndarray  # N @ 1_n, as float
    # flattened signed nonzeros used by the kernels: +1 for P, -1 for N
    nz_row: np.ndarray
    nz_col: np.ndarray
    nz_sign: np.ndarray
    # (width, m): column i lists clause i's variables padded with the sentinel
    # index n; None when padding would dwarf the nonzeros
    pos_pad: np.ndarray | None = None
    neg_pad: np.ndarray | None = None
    # P - N in CSR form and its transpose, for the two products
    diff: sp.csr_matrix | None = None
    diff_t: sp.csr_matrix | None = None

    @property
    def nnz(self) -> int:
        return len(self.nz_row)

    def row_pos(self, i: int) -> list[int]:
        return self.pos_indices[self.pos_indptr[i]:self.pos_indptr[i + 1]].tolist()

    def row_neg(self, i: int) -> list[int]:
        return self.neg_indices[self.neg_indptr[i]:self.neg_indptr[i + 1]].tolist()

    def col_pos(self, j: int) -> list[int]:
        return self.colpos_indices[self.colpos_indptr[j]:self.colpos_indptr[j + 1]].tolist()

    def col_neg(self, j: int) -> list[int]:
        return self.colneg_indices[self.colneg_indptr[j]:self.colneg_indptr[j + 1]].tolist()

    def occurrences(self) -> np.ndarray:
        """Per-variable count of (clause, polarity) incidences."""
        return np.diff(self.colpos_indptr) + np.diff(self.colneg_indptr)


def build_matrix(cnf: CnfInstance) -> InstanceMatrix:
    if cnf.has_empty_clause():
        raise EmptyClauseError("empty clause has no matrix row semantics")
    m, n = cnf.num_clauses, cnf.num_vars
    rows, cols, signs = [], [], []
    for i, clause in enumerate(cnf.clauses):
        for lit in set(clause):
            rows.append(i)
            cols.append(abs(lit) - 1)
            signs.append(1 if lit > 0 else -1)
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    signs = np.asarray(signs, dtype=np.int8)
    pos, neg = signs > 0, signs < 0

    pos_indptr, pos_indices = _csr(rows[pos], cols[pos], m)
    neg_indptr, neg_indices = _csr(rows[neg], cols[neg], m)
    colpos_indptr, colpos_indices = _csr(cols[pos], rows[pos], n)
    colneg_indptr, colneg_indices = _csr(cols[neg], rows[neg], n)

    order = np.lexsort((cols, rows))
    diff = sp.csr_matrix((signs.astype(np.float64), (rows, cols)), shape=(m, n))
    return InstanceMatrix(
        diff=diff, diff_t=diff.T.tocsr(),
        pos_pad=_pad_rows(pos_indptr, pos_indices, n),
        neg_pad=_pad_rows(neg_indptr, neg_indices, n),
        m=m, n=n,
        pos_indptr=pos_indptr, pos_indices=pos_indices,
        neg_indptr=neg_indptr, neg_indices=neg_indices,
        colpos_indptr=colpos_indptr, colpos_indices=colpos_indices,
        colneg_indptr=colneg_indptr, colneg_indices=colneg_indices,
        neg_count=np.diff(neg_indptr).astype(np.float64),
        nz_row=rows[order], nz_col=cols[order],
        nz_sign=signs[order].astype(np.float64),
    )


def _pad_rows(indptr, indices, sentinel):
    lengths = np.diff(indptr)
    width = int(lengths.max()) if len(lengths) else 0
    m = len(lengths)
    if width == 0 or m * width > 4 * len(indices) + m:
        return None
    pad = np.full((m, width), sentinel, dtype=np.int64)
    slot = np.arange(len(indices)) - np.repeat(indptr[:-1], lengths)
    pad[np.repeat(np.arange(m), lengths), slot] = indices
    return np.ascontiguousarray(pad.T)


def _check_len(vec: np.ndarray, size: int, what: str):
    if vec.ndim != 1 or vec.shape[0] != size:
        raise ValueError(f"{what} has shape {vec.shape}, expected ({size},)")


def clause_sums(Q: InstanceMatrix, u) -> np.ndarray:
    """Relaxed true-literal count per clause: ``N @ 1 + (P - N) @ u``."""
    u = np.asarray(u, dtype=np.float64)
    _check_len(u, Q.n, "assignment")
    return Q.neg_count + Q.diff @ u


def transpose_diff_product(Q: InstanceMatrix, v) -> np.ndarray:
    """``(N - P)^T @ v``."""
    v = np.asarray(v, dtype=np.float64)
    _check_len(v, Q.m, "clause vector")
    return -(Q.diff_t @ v)


def clause_extremes(Q: InstanceMatrix, u) -> tuple[np.ndarray, np.ndarray]:
    """Largest ``u`` over each clause's positive variables and smallest over its
    negative ones (``-inf`` / ``+inf`` when a clause has none).

    Under ``u >= theta`` a clause is falsified exactly when
    ``max_pos < theta <= min_neg``.
    """
    u = np.asarray(u, dtype=np.float64)
    return (_segment_reduce(np.maximum, u, Q.pos_indptr, Q.pos_indices, Q.pos_pad, -np.inf),
            _segment_reduce(np.minimum, u, Q.neg_indptr, Q.neg_indices, Q.neg_pad, np.inf))


def _segment_reduce(ufunc, u, indptr, indices, pad, empty):
    if pad is not None:
        return ufunc.reduce(np.append(u, empty)[pad], axis=0)
    out = np.full(len(indptr) - 1, empty)
    nonempty = np.flatnonzero(np.diff(indptr))
    if len(nonempty):
        out[nonempty] = ufunc.reduceat(u[indices], indptr[nonempty])
    return out
