"""Incomplete SAT solving by Newton iteration on a continuous relaxation."""
from .cnf import (CnfInstance, DimacsError, EmptyClauseError, parse_dimacs, read_dimacs,
                  verify_assignment, write_dimacs)
from .generate import GenSpec, GeneratedInstance, generate_forced_ksat, write_instance
from .matrix import InstanceMatrix, build_matrix, clause_sums, transpose_diff_product
from .solver import (SolveOutcome, SolverConfig, Status, count_unsat, eval_cost, eval_jacobian,
                     newton_step, perturb, solve, solve_portfolio, threshold_search)
from .weighted import (WeightVectors, compute_weights, eval_cost_weighted,
                       eval_jacobian_weighted, solve_weighted)

__version__ = "0.1.0"
