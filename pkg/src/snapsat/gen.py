"""Random CNF instances for desk-scale experiments."""

from __future__ import annotations

import random

from .cnf import Formula


def random_kcnf(n: int, m: int, k: int = 3, rng: random.Random | None = None,
                name: str = "") -> Formula:
    """m clauses of k distinct variables each, signs uniform."""
    rng = rng or random.Random()
    if k > n:
        raise ValueError("clause width exceeds variable count")
    clauses = [[v if rng.getrandbits(1) else -v for v in rng.sample(range(1, n + 1), k)]
               for _ in range(m)]
    return Formula.from_ints(n, clauses, name)
