import itertools
import random

import pytest

from snapsat.cnf import Assignment, Formula
from snapsat.gen import random_kcnf
from snapsat.solver import brute_force_solutions


def naive_evaluate(f: Formula, bits) -> bool:
    """Reference evaluator over the Literal objects, independent of cnf.evaluate."""
    for clause in f.clauses:
        if not any((bits[lit.var - 1] == 0) if lit.negated else (bits[lit.var - 1] == 1)
                   for lit in clause.literals):
            return False
    return True


def enumerate_solutions(f: Formula) -> set:
    """itertools-based enumeration; a second route next to brute_force_solutions."""
    return {Assignment(bits) for bits in itertools.product((0, 1), repeat=f.num_vars)
            if naive_evaluate(f, bits)}


def satisfiable_instances(count, n_range, ratio_range, seed):
    """Random satisfiable 3-CNF formulas with their brute-force solution sets."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(*n_range)
        m = max(1, int(n * rng.uniform(*ratio_range)))
        f = random_kcnf(n, m, 3, rng, name=f"r{len(out)}")
        sols = brute_force_solutions(f)
        if sols:
            out.append((f, sols))
    return out


@pytest.fixture
def rng():
    return random.Random(1234)


ACCEPTANCE_RESULTS: list[str] = []


def record_acceptance(number: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_RESULTS.append(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_RESULTS):
            terminalreporter.write_line(line)
