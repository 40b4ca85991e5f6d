"""Planted ("forced") random k-SAT instances.

A hidden assignment is drawn first; clauses over k distinct variables with
fair-coin signs are then drawn uniformly and kept only if the hidden
assignment satisfies them, until m clauses are kept.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .cnf import CnfInstance, format_model, verify_assignment, write_dimacs
from .solver import SEED_MASK


@dataclass(frozen=True)
class GenSpec:
    n: int
    m: int
    k: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.m < 1 or self.k < 1:
            raise ValueError("n, m and k must be positive")
        if self.k > self.n:
            raise ValueError(f"k={self.k} exceeds n={self.n}: clauses need k distinct variables")


@dataclass(frozen=True)
class GeneratedInstance:
    cnf: CnfInstance
    hidden: np.ndarray
    spec: Optional[GenSpec] = None


def sample_clauses(rng: np.random.Generator, n: int, k: int, count: int):
    """Draw ``count`` clauses before any planting filter.

    Returns ``(variables, signs)``, both ``(count, k)``: 0-based variable
    indices that are distinct within a row (uniform over ordered k-tuples),
    and signs in ``{+1, -1}``.
    """
    parts, have = [], 0
    while have < count:
        batch = max(64, int((count - have) * 1.25))
        v = rng.integers(0, n, size=(batch, k))
        if k > 1:
            s = np.sort(v, axis=1)
            v = v[np.all(s[:, 1:] != s[:, :-1], axis=1)]
        parts.append(v)
        have += len(v)
    variables = np.concatenate(parts)[:count]
    signs = np.where(rng.integers(0, 2, size=(count, k)) == 1, 1, -1)
    return variables, signs


def generate_forced_ksat(spec: GenSpec) -> GeneratedInstance:
    rng = np.random.default_rng(spec.seed & SEED_MASK)
    hidden = rng.integers(0, 2, size=spec.n).astype(np.int8)

    kept, have = [], 0
    while have < spec.m:
        # expected acceptance is 1 - 2^-k
        batch = max(16, int((spec.m - have) / (1 - 0.5 ** spec.k) * 1.1) + 1)
        variables, signs = sample_clauses(rng, spec.n, spec.k, batch)
        true_lit = (hidden[variables] == 1) == (signs > 0)
        lits = (variables + 1) * signs
        ok = lits[true_lit.any(axis=1)]
        kept.append(ok)
        have += len(ok)
    clauses = np.concatenate(kept)[:spec.m]
    cnf = CnfInstance(spec.n, tuple(tuple(int(x) for x in row) for row in clauses))
    return GeneratedInstance(cnf=cnf, hidden=hidden, spec=spec)


def _comment_lines(gi: GeneratedInstance) -> list[str]:
    if gi.spec is None:
        return []
    s = gi.spec
    return ["forced uniform random k-SAT (planted solution)",
            f"n={s.n} m={s.m} k={s.k} seed={s.seed}"]


def write_instance(gi: GeneratedInstance, with_solution: bool = False):
    """Serialize to ``(cnf_bytes, solution_bytes_or_None)``."""
    cnf_bytes = write_dimacs(gi.cnf, comments=_comment_lines(gi))
    sol = (format_model(gi.hidden) + "\n").encode("ascii") if with_solution else None
    return cnf_bytes, sol


def save_instance(gi: GeneratedInstance, path: Union[str, Path], with_solution: bool = False):
    """Write ``path`` and, if requested, the ``.sol`` sidecar next to it."""
    path = Path(path)
    cnf_bytes, sol = write_instance(gi, with_solution)
    path.write_bytes(cnf_bytes)
    written = [path]
    if sol is not None:
        sol_path = path.with_suffix(".sol")
        sol_path.write_bytes(sol)
        written.append(sol_path)
    return written


def generate_planted_coloring(vertices: int, edges: int, colors: int = 3, seed: int = 0) -> GeneratedInstance:
    """Graph colouring of a random graph with a planted proper colouring.

    Encoding: variable ``v*colors + c + 1`` means vertex v has colour c; each
    vertex has an at-least-one clause and pairwise at-most-one clauses, each
    edge one clause per colour forbidding equal endpoints. Unlike uniform
    random k-SAT the occurrence counts vary a lot between variables.
    """
    if colors < 2 or vertices < 2:
        raise ValueError("need at least 2 vertices and 2 colours")
    rng = np.random.default_rng(seed & SEED_MASK)
    palette = rng.integers(0, colors, size=vertices)
    max_edges = sum(int(np.sum(palette != palette[v])) for v in range(vertices)) // 2
    if edges > max_edges:
        raise ValueError(f"at most {max_edges} edges fit the planted colouring")

    chosen: set[tuple[int, int]] = set()
    while len(chosen) < edges:
        a, b = (int(x) for x in rng.integers(0, vertices, size=2))
        if palette[a] != palette[b]:
            chosen.add((min(a, b), max(a, b)))

    def var(v, c):
        return v * colors + c + 1

    clauses = []
    for v in range(vertices):
        clauses.append(tuple(var(v, c) for c in range(colors)))
        for c1 in range(colors):
            for c2 in range(c1 + 1, colors):
                clauses.append((-var(v, c1), -var(v, c2)))
    for a, b in sorted(chosen):
        for c in range(colors):
            clauses.append((-var(a, c), -var(b, c)))

    hidden = np.zeros(vertices * colors, dtype=np.int8)
    hidden[np.arange(vertices) * colors + palette] = 1
    cnf = CnfInstance(vertices * colors, tuple(clauses))
    assert verify_assignment(cnf, hidden)[0]
    return GeneratedInstance(cnf=cnf, hidden=hidden)
