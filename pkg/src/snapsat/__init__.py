"""Small, diverse, valid solution suites for CNF formulas via XOR mutation and NCD."""

from .cnf import (Assignment, Clause, Formula, Literal, ParseError, evaluate, parse_assignment,
                  parse_dimacs, read_dimacs, serialize_assignment, to_dimacs, unsat_clauses)
from .diversity import (CompressorConfig, c_of_set, compressed_size, cx_distribution, ncd_pair,
                        ncd_set)
from .loop import Mode, SnapConfig, Status, TestSuite, run, run_solver_only, run_xor_only
from .metrics import SuiteReport, credibility, marginal_entropy, uniqueness
from .mutate import MutationPool, atomic_deltas, combine_candidates, xor
from .solver import Budget, brute_force_solutions, repair, solve, solve_seeded

__version__ = "0.1.0"
