"""CNF data model, DIMACS reading/writing and direct assignment checking.

Clauses are stored as tuples of signed DIMACS literals (``3`` is variable 3
positive, ``-3`` is variable 3 negated). Assignments are 0/1 numpy vectors
where entry ``j`` holds the value of variable ``j + 1``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

logger = logging.getLogger(__name__)


class DimacsError(ValueError):
    """Malformed DIMACS input."""


class EmptyClauseError(DimacsError):
    """The formula contains an empty clause and is trivially unsatisfiable."""


@dataclass(frozen=True)
class CnfInstance:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]
    # parse-time diagnostics; not part of the formula's identity
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(int(l) for l in c) for c in self.clauses))
        if self.num_vars < 1:
            raise ValueError(f"num_vars must be >= 1, got {self.num_vars}")
        if not self.clauses:
            raise ValueError("a CNF instance needs at least one clause")
        for i, clause in enumerate(self.clauses, start=1):
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"clause {i}: literal {lit} out of range 1..{self.num_vars}")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def has_empty_clause(self) -> bool:
        return any(len(c) == 0 for c in self.clauses)


def parse_dimacs(data: Union[bytes, str]) -> CnfInstance:
    """Parse DIMACS CNF text.

    Clauses may span lines or share a line. A line starting with ``%``
    ends the body (SATLIB convention). When the number of clauses in the body
    disagrees with the header, the body wins and a warning is recorded on the
    returned instance.

    Raises
    ------
    DimacsError
        Missing or malformed header, non-integer tokens, or a literal whose
        magnitude exceeds the declared variable count.
    EmptyClauseError
        A clause with no literals (a terminator directly following another).
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")

    num_vars = declared_m = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    warnings: list[str] = []

    for lineno, raw in enumerate(data.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            if num_vars is not None:
                raise DimacsError(f"line {lineno}: duplicate header")
            fields = line.split()
            if len(fields) != 4 or fields[0] != "p" or fields[1] != "cnf":
                raise DimacsError(f"line {lineno}: malformed header {line!r}")
            try:
                num_vars, declared_m = int(fields[2]), int(fields[3])
            except ValueError:
                raise DimacsError(f"line {lineno}: malformed header {line!r}") from None
            if num_vars < 1 or declared_m < 0:
                raise DimacsError(f"line {lineno}: malformed header {line!r}")
            continue
        if num_vars is None:
            raise DimacsError(f"line {lineno}: clause data before 'p cnf' header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"line {lineno}: bad literal {tok!r}") from None
            if lit == 0:
                if not current:
                    raise EmptyClauseError(
                        f"line {lineno}: empty clause {len(clauses) + 1}; "
                        "formula is trivially unsatisfiable")
                clauses.append(tuple(current))
                current = []
            elif abs(lit) > num_vars:
                raise DimacsError(f"line {lineno}: literal {lit} exceeds n={num_vars}")
            else:
                current.append(lit)

    if num_vars is None:
        raise DimacsError("missing 'p cnf' header")
    if current:
        warnings.append(f"last clause not terminated by 0; kept as clause {len(clauses) + 1}")
        clauses.append(tuple(current))
    if not clauses:
        raise DimacsError("no clauses in body")
    if len(clauses) != declared_m:
        warnings.append(f"header m={declared_m}, body m={len(clauses)}")
    for w in warnings:
        logger.warning(w)
    return CnfInstance(num_vars, tuple(clauses), tuple(warnings))


def read_dimacs(path: Union[str, Path]) -> CnfInstance:
    return parse_dimacs(Path(path).read_bytes())


def write_dimacs(cnf: CnfInstance, comments: Sequence[str] = ()) -> bytes:
    if cnf.has_empty_clause():
        raise EmptyClauseError("cannot write a formula containing an empty clause")
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {cnf.num_vars} {cnf.num_clauses}")
    lines.extend(" ".join(map(str, clause)) + " 0" for clause in cnf.clauses)
    return ("\n".join(lines) + "\n").encode("ascii")


def as_assignment(bits: Iterable[int], num_vars: int) -> np.ndarray:
    u = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=np.int8)
    if u.ndim != 1 or u.shape[0] != num_vars:
        raise ValueError(f"assignment length {u.shape} does not match n={num_vars}")
    if not np.all((u == 0) | (u == 1)):
        raise ValueError("assignment entries must be 0 or 1")
    return u


def verify_assignment(cnf: CnfInstance, u) -> tuple[bool, list[int]]:
    """Evaluate every clause under ``u`` without going through the matrix form.

    Returns ``(satisfied, unsat)`` where ``unsat`` lists the falsified clauses
    by their 1-based position in the file.
    """
    u = as_assignment(u, cnf.num_vars)
    unsat = []
    for i, clause in enumerate(cnf.clauses, start=1):
        if not any((u[abs(l) - 1] == 1) == (l > 0) for l in clause):
            unsat.append(i)
    return not unsat, unsat


def format_model(u) -> str:
    """Signed-literal rendering of an assignment, terminated by 0."""
    return " ".join(str(j if b else -j) for j, b in enumerate(u, start=1)) + " 0"


def parse_model(text: Union[bytes, str], num_vars: int) -> np.ndarray:
    """Read a model written as signed literals (optionally on ``v`` lines)."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    u = np.zeros(num_vars, dtype=np.int8)
    seen = np.zeros(num_vars, dtype=bool)
    for line in text.splitlines():
        toks = line.split()
        if toks and toks[0] == "v":
            toks = toks[1:]
        elif toks and not toks[0].lstrip("-").isdigit():
            continue
        for tok in toks:
            lit = int(tok)
            if lit == 0:
                continue
            if abs(lit) > num_vars:
                raise ValueError(f"model literal {lit} exceeds n={num_vars}")
            u[abs(lit) - 1] = lit > 0
            seen[abs(lit) - 1] = True
    if not seen.all():
        raise ValueError(f"model misses {int((~seen).sum())} variables")
    return u
