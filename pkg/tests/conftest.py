import numpy as np
import pytest

from relaxsat.cnf import CnfInstance, parse_dimacs

S0_TEXT = "p cnf 3 2\n1 2 -3 0\n-1 -2 0\n"


@pytest.fixture
def s0():
    return parse_dimacs(S0_TEXT)


def random_cnf(rng, n, m, ks=(2, 3)):
    """Unplanted random CNF; may well be unsatisfiable for small n."""
    clauses = []
    for _ in range(m):
        k = int(rng.choice(ks))
        k = min(k, n)
        vs = rng.choice(np.arange(1, n + 1), size=k, replace=False)
        signs = rng.choice([-1, 1], size=k)
        clauses.append(tuple(int(v * s) for v, s in zip(vs, signs)))
    return CnfInstance(n, tuple(clauses))


def literal_truth_sums(cnf, u):
    """Clause sums straight from the definition, per distinct literal."""
    out = []
    for clause in cnf.clauses:
        total = 0.0
        for lit in sorted(set(clause)):
            x = u[abs(lit) - 1]
            total += x if lit > 0 else 1.0 - x
        out.append(total)
    return np.array(out)
