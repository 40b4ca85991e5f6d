import numpy as np
import pytest

from relaxsat.cnf import CnfInstance, verify_assignment
from relaxsat.generate import GenSpec, generate_forced_ksat, generate_planted_coloring
from relaxsat.matrix import build_matrix
from relaxsat.oracle import finite_diff_gradient
from relaxsat.solver import SolverConfig, Status, eval_cost, eval_jacobian, solve
from relaxsat.weighted import (WeightVectors, compute_weights, eval_cost_weighted,
                               eval_jacobian_weighted, solve_weighted)

from conftest import random_cnf


def unit_weights(Q):
    return WeightVectors(np.ones(Q.n), np.ones(Q.m), np.ones(Q.n, dtype=np.int64))


def cyclic_instance(n, k, seed):
    """Clause i uses variables i .. i+k-1 (mod n): every variable occurs k times."""
    rng = np.random.default_rng(seed)
    clauses = []
    for i in range(n):
        signs = rng.choice([-1, 1], size=k)
        clauses.append(tuple(int(s) * ((i + j) % n + 1) for j, s in enumerate(signs)))
    return CnfInstance(n, tuple(clauses))


def test_weights_example(s0):
    w = compute_weights(build_matrix(s0))
    assert w.w_v_raw.tolist() == [2, 2, 1]
    np.testing.assert_allclose(w.w_v, [1.2, 1.2, 0.6], rtol=1e-15)
    np.testing.assert_allclose(w.w_c, [3.0, 2.4], rtol=1e-15)


def test_weights_uniform_occurrence():
    w = compute_weights(build_matrix(cyclic_instance(40, 3, 0)))
    assert np.all(w.w_v == 1.0)
    assert np.all(w.w_c == 3.0)


def test_weight_of_unused_variable_is_zero():
    w = compute_weights(build_matrix(CnfInstance(4, ((1, 2), (-1, 3)))))
    assert w.w_v_raw.tolist() == [2, 1, 1, 0]
    assert w.w_v[3] == 0.0


def test_tautology_counts_variable_once_in_clause_weight():
    w = compute_weights(build_matrix(CnfInstance(2, ((1, -1), (2,)))))
    assert w.w_v_raw.tolist() == [2, 1]
    assert w.w_c[0] == pytest.approx(w.w_v[0])


def test_weight_mean_is_one():
    rng = np.random.default_rng(1)
    for _ in range(100):
        n = int(rng.integers(2, 60))
        w = compute_weights(build_matrix(random_cnf(rng, n, int(rng.integers(1, 200)), (1, 2, 3, 5))))
        assert w.w_v.mean() == pytest.approx(1.0, rel=1e-12)
        assert np.all(w.w_v >= 0) and np.all(w.w_c >= 0)


def test_weighted_cost_example(s0):
    Q = build_matrix(s0)
    w = compute_weights(Q)
    assert eval_cost_weighted(Q, [1, 0, 0], w, 1.0) == 0.0
    # 2.4*0.8 + 0.5*(1.44 + 1.44 + 0.36)*0.0081
    assert eval_cost_weighted(Q, [0.9] * 3, w, 1.0) == pytest.approx(1.933122, abs=1e-12)


def test_weighted_jacobian_example(s0):
    Q = build_matrix(s0)
    w = compute_weights(Q)
    u = np.full(3, 0.9)
    jac = eval_jacobian_weighted(Q, u, w, 1.0)
    np.testing.assert_allclose(jac, [2.29632, 2.29632, -0.02592], atol=1e-14)
    fd = finite_diff_gradient(lambda x: eval_cost_weighted(Q, x, w, 1.0), u)
    np.testing.assert_allclose(fd, jac, rtol=1e-5, atol=1e-8)
    assert np.all(eval_jacobian_weighted(Q, [1, 0, 0], w, 1.0) == 0)


def test_dimension_mismatch(s0):
    Q = build_matrix(s0)
    w = WeightVectors(np.ones(2), np.ones(2), np.ones(2))
    with pytest.raises(ValueError):
        eval_cost_weighted(Q, [0, 0, 0], w, 1.0)


def test_unit_weights_reduce_to_unweighted():
    rng = np.random.default_rng(2)
    for _ in range(200):
        n = int(rng.integers(2, 30))
        Q = build_matrix(random_cnf(rng, n, int(rng.integers(1, 100))))
        w = unit_weights(Q)
        u = rng.normal(0.5, 0.7, size=n)
        ell = float(rng.uniform(0.1, 5))
        assert eval_cost_weighted(Q, u, w, ell) == pytest.approx(eval_cost(Q, u, ell), rel=1e-12, abs=0)
        np.testing.assert_allclose(eval_jacobian_weighted(Q, u, w, ell), eval_jacobian(Q, u, ell),
                                   rtol=1e-12, atol=0)


def test_weighted_gradient_finite_differences():
    rng = np.random.default_rng(3)
    for s in range(5):
        Q = build_matrix(generate_forced_ksat(GenSpec(20, 85, 3, seed=s)).cnf)
        w = compute_weights(Q)
        for _ in range(20):
            u = rng.uniform(-0.2, 1.2, size=Q.n)
            jac = eval_jacobian_weighted(Q, u, w, 1.0)
            fd = finite_diff_gradient(lambda x: eval_cost_weighted(Q, x, w, 1.0), u)
            from relaxsat.matrix import clause_sums
            if np.min(np.abs(clause_sums(Q, u) - 1.0)) < 1e-4:
                continue
            np.testing.assert_allclose(fd, jac, rtol=1e-5, atol=1e-8)


def test_solve_weighted_s0(s0):
    out = solve_weighted(build_matrix(s0))
    assert out.status is Status.SATISFIED
    assert verify_assignment(s0, out.assignment)[0]


def test_solve_weighted_is_sound():
    rng = np.random.default_rng(4)
    for i in range(20):
        cnf = random_cnf(rng, 10, int(rng.integers(10, 70)))
        out = solve_weighted(build_matrix(cnf), SolverConfig(seed=i, max_itr=40, max_try=3))
        assert (out.status is Status.SATISFIED) == verify_assignment(cnf, out.assignment)[0]


def test_uniform_occurrence_matches_rescaled_unweighted():
    # with w_v = 1 and w_c = k the weighted cost is k times the unweighted cost
    # at ell / k, and the Newton step is invariant to that scale
    k, ell = 3, 1.0
    for seed in range(3):
        Q = build_matrix(cyclic_instance(60, k, seed))
        cfg = SolverConfig(ell=ell, seed=seed, max_itr=40, max_try=4)
        tw, tu = [], []
        ow = solve_weighted(Q, cfg, trace=lambda it, th, e: tw.append((it, e)))
        ou = solve(Q, SolverConfig(ell=ell / k, seed=seed, max_itr=40, max_try=4),
                   trace=lambda it, th, e: tu.append((it, e)))
        assert tw == tu
        assert ow.error == ou.error and np.array_equal(ow.assignment, ou.assignment)


def test_planted_coloring_valid():
    gi = generate_planted_coloring(30, 60, 3, seed=1)
    assert gi.cnf.num_vars == 90
    assert verify_assignment(gi.cnf, gi.hidden)[0]
    w = compute_weights(build_matrix(gi.cnf))
    assert w.w_v_raw.min() < w.w_v_raw.max()
