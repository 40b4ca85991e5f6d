import numpy as np
import pytest

from relaxsat.cnf import CnfInstance, verify_assignment
from relaxsat.generate import GenSpec, generate_forced_ksat
from relaxsat.oracle import (OracleLimitError, brute_force_min_error, brute_force_solve,
                             finite_diff_gradient, satisfying_codes, unsat_counts)


def test_s0(s0):
    assert brute_force_solve(s0).tolist() == [0, 0, 0]
    u, err = brute_force_min_error(s0)
    assert err == 0 and u.tolist() == [0, 0, 0]


def test_contradiction():
    cnf = CnfInstance(1, ((1,), (-1,)))
    assert brute_force_solve(cnf) is None
    assert len(satisfying_codes(cnf)) == 0


def test_min_error_tie_break():
    u, err = brute_force_min_error(CnfInstance(1, ((1,), (1,), (-1,))))
    assert u.tolist() == [1] and err == 1
    u, err = brute_force_min_error(CnfInstance(2, ((1,), (-1,), (2,), (-2,))))
    assert u.tolist() == [0, 0] and err == 2


def test_planted_instances_are_sat():
    for seed in range(10):
        gi = generate_forced_ksat(GenSpec(14, 60, 3, seed=seed))
        u = brute_force_solve(gi.cnf)
        assert u is not None and verify_assignment(gi.cnf, u)[0]


def test_codes_are_msb_first():
    cnf = CnfInstance(3, ((1,), (-2,), (-3,)))
    assert satisfying_codes(cnf).tolist() == [0b100]
    assert unsat_counts(cnf, 0, 8).tolist() == [1, 2, 2, 3, 0, 1, 1, 2]


def test_cap():
    with pytest.raises(OracleLimitError):
        brute_force_solve(CnfInstance(27, ((1,),)))


def test_finite_diff_quadratic_and_constant():
    a = np.array([1.0, -2.0, 3.0])
    g = finite_diff_gradient(lambda x: float(np.dot(x, x) + a @ x), np.array([0.5, 1.0, -1.0]))
    np.testing.assert_allclose(g, [2.0, 0.0, 1.0], atol=1e-8)
    assert np.all(finite_diff_gradient(lambda x: 4.0, np.zeros(4)) == 0)
    with pytest.raises(ValueError):
        finite_diff_gradient(lambda x: 0.0, np.zeros(2), h=0)
