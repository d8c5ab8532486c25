"""Embedded SAT engine: DPLL search, model enumeration and candidate repair.

Budgets are step counts (propagated literals, decisions, local-search flips)
with an optional wall-clock cap, so a fixed seed and step budget always
reproduce the same outcome.
"""

from __future__ import annotations

import enum
import random
import time
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .cnf import Assignment, Formula, evaluate

BRUTE_FORCE_MAX_VARS = 20


class SolveStatus(str, enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    TIMEOUT = "TIMEOUT"


class RepairStatus(str, enum.Enum):
    REPAIRED = "REPAIRED"
    FAILED = "FAILED"


@dataclass(frozen=True)
class Budget:
    steps: int = 200_000
    wall_secs: float | None = None

    def deadline(self) -> float | None:
        return None if self.wall_secs is None else time.monotonic() + self.wall_secs


@dataclass(frozen=True)
class SolveOutcome:
    status: SolveStatus
    model: Assignment | None
    elapsed: float
    steps: int


@dataclass(frozen=True)
class RepairOutcome:
    status: RepairStatus
    model: Assignment | None
    flips: int
    elapsed: float
    steps: int


class _Timeout(Exception):
    pass


class _Dpll:
    """Chronological-backtracking DPLL with two watched literals per clause."""

    def __init__(self, num_vars, clauses, order, polarity, budget_steps, deadline):
        self.n = num_vars
        self.order = order
        self.rank = [0] * (num_vars + 1)
        for i, v in enumerate(order):
            self.rank[v] = i
        self.polarity = polarity
        self.budget = budget_steps
        self.deadline = deadline
        self.steps = 0
        self.val = [-1] * (num_vars + 1)
        self.trail: list[int] = []
        self.qhead = 0
        self.units: list[int] = []
        self.clauses: list[list[int]] = []
        self.watches: list[list[int]] = [[] for _ in range(2 * num_vars + 2)]
        self.trivially_unsat = False
        for c in clauses:
            lits = list(dict.fromkeys(c))
            s = set(lits)
            if any(-x in s for x in lits):
                continue
            if not lits:
                self.trivially_unsat = True
            elif len(lits) == 1:
                self.units.append(lits[0])
            else:
                ci = len(self.clauses)
                self.clauses.append(lits)
                self.watches[self._idx(lits[0])].append(ci)
                self.watches[self._idx(lits[1])].append(ci)

    @staticmethod
    def _idx(lit: int) -> int:
        return 2 * lit if lit > 0 else -2 * lit + 1

    def _value(self, lit: int) -> int:
        v = self.val[abs(lit)]
        if v < 0:
            return -1
        return v if lit > 0 else 1 - v

    def _assign(self, lit: int) -> None:
        self.val[abs(lit)] = 1 if lit > 0 else 0
        self.trail.append(lit)

    def _tick(self) -> None:
        self.steps += 1
        if self.steps > self.budget:
            raise _Timeout
        if self.deadline is not None and self.steps % 1024 == 0 and time.monotonic() > self.deadline:
            raise _Timeout

    def _propagate(self) -> bool:
        """Returns False on conflict."""
        clauses, watches, value = self.clauses, self.watches, self._value
        while self.qhead < len(self.trail):
            lit = self.trail[self.qhead]
            self.qhead += 1
            self._tick()
            false_lit = -lit
            fi = self._idx(false_lit)
            wl = watches[fi]
            keep = []
            k = 0
            ok = True
            while k < len(wl):
                ci = wl[k]
                k += 1
                c = clauses[ci]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                first = c[0]
                if value(first) == 1:
                    keep.append(ci)
                    continue
                for t in range(2, len(c)):
                    if value(c[t]) != 0:
                        c[1], c[t] = c[t], c[1]
                        watches[self._idx(c[1])].append(ci)
                        break
                else:
                    keep.append(ci)
                    if value(first) == 0:
                        keep.extend(wl[k:])
                        ok = False
                        break
                    self._assign(first)
            watches[fi] = keep
            if not ok:
                return False
        return True

    def solve(self) -> bool | None:
        """True (model in self.val), False (UNSAT) or None (budget exhausted)."""
        if self.trivially_unsat:
            return False
        try:
            for u in self.units:
                v = self._value(u)
                if v == 0:
                    return False
                if v < 0:
                    self._assign(u)
            # stack entries: (trail length before decision, var, value, flipped)
            decisions: list[tuple[int, int, int, bool]] = []
            cursor = 0
            while True:
                if not self._propagate():
                    while decisions:
                        pos, var, value, flipped = decisions.pop()
                        for lit in self.trail[pos:]:
                            self.val[abs(lit)] = -1
                            cursor = min(cursor, self.rank[abs(lit)])
                        del self.trail[pos:]
                        self.qhead = pos
                        if not flipped:
                            decisions.append((pos, var, 1 - value, True))
                            self._assign(var if value == 0 else -var)
                            break
                    else:
                        return False
                    continue
                while cursor < self.n and self.val[self.order[cursor]] >= 0:
                    cursor += 1
                if cursor == self.n:
                    return True
                self._tick()
                var = self.order[cursor]
                value = self.polarity[var]
                decisions.append((len(self.trail), var, value, False))
                self._assign(var if value else -var)
        except _Timeout:
            return None

    def model(self) -> Assignment:
        return Assignment(tuple(self.val[1:]))


def _run_dpll(f: Formula, extra: Sequence[Sequence[int]], rng: random.Random,
              budget: Budget, polarity_hint: Assignment | None = None,
              deadline: float | None = None) -> SolveOutcome:
    t0 = time.perf_counter()
    order = list(range(1, f.num_vars + 1))
    rng.shuffle(order)
    if polarity_hint is not None:
        polarity = [0, *polarity_hint.bits]
    else:
        polarity = [0, *(rng.getrandbits(1) for _ in range(f.num_vars))]
    if deadline is None:
        deadline = budget.deadline()
    engine = _Dpll(f.num_vars, [*f.signed_clauses, *extra], order, polarity,
                   budget.steps, deadline)
    res = engine.solve()
    elapsed = time.perf_counter() - t0
    if res is True:
        return SolveOutcome(SolveStatus.SAT, engine.model(), elapsed, engine.steps)
    status = SolveStatus.UNSAT if res is False else SolveStatus.TIMEOUT
    return SolveOutcome(status, None, elapsed, engine.steps)


def solve(f: Formula, budget: Budget = Budget(), seed: int = 0,
          polarity_hint: Assignment | None = None) -> SolveOutcome:
    """Complete DPLL search with randomized variable order and polarity.

    ``polarity_hint`` replaces the random polarity with preferred bit values.
    """
    if polarity_hint is not None and len(polarity_hint) != f.num_vars:
        raise ValueError("polarity hint length does not match formula")
    return _run_dpll(f, (), random.Random(seed), budget, polarity_hint)


def _blocking_clause(a: Assignment) -> tuple[int, ...]:
    return tuple(-(i + 1) if b else (i + 1) for i, b in enumerate(a.bits))


def enumerate_models(f: Formula, k: int, seed: int = 0, budget: Budget = Budget(),
                     exclude: Sequence[Assignment] = ()) -> Iterator[SolveOutcome]:
    """Yield one outcome per solver call until k models, UNSAT, or TIMEOUT.

    Every found model is blocked before the next call, so the models are
    distinct and a final UNSAT means the solution space (minus ``exclude``)
    is exhausted. ``budget.steps`` applies per call.
    """
    rng = random.Random(seed)
    blocked = [_blocking_clause(a) for a in exclude]
    if f.num_vars == 0:
        # the only assignment is the empty one; a blocking clause would be empty
        if exclude or k <= 0:
            yield SolveOutcome(SolveStatus.UNSAT, None, 0.0, 0)
            return
    found = 0
    while found < k:
        out = _run_dpll(f, blocked, random.Random(rng.getrandbits(64)), budget)
        yield out
        if out.status is not SolveStatus.SAT:
            return
        found += 1
        if f.num_vars == 0:
            if found < k:
                yield SolveOutcome(SolveStatus.UNSAT, None, 0.0, 0)
            return
        blocked.append(_blocking_clause(out.model))


def solve_seeded(f: Formula, k: int, seed: int = 0, budget: Budget = Budget(),
                 exclude: Sequence[Assignment] = ()) -> list[Assignment]:
    return [o.model for o in enumerate_models(f, k, seed, budget, exclude)
            if o.status is SolveStatus.SAT]


class _LocalSearch:
    def __init__(self, f: Formula):
        self.n = f.num_vars
        self.clauses = [c for c in f.signed_clauses
                        if not any(-x in c for x in c)]
        self.occ: list[list[int]] = [[] for _ in range(2 * self.n + 2)]
        for ci, c in enumerate(self.clauses):
            for lit in c:
                self.occ[_Dpll._idx(lit)].append(ci)

    def run(self, start: Sequence[int], rng: random.Random, max_flips: int,
            p_noise: float) -> tuple[list[int] | None, int]:
        bits = [0, *start]
        clauses, occ, idx = self.clauses, self.occ, _Dpll._idx
        num_true = [0] * len(clauses)
        unsat: list[int] = []
        where = [-1] * len(clauses)
        for ci, c in enumerate(clauses):
            t = sum(1 for l in c if (bits[l] if l > 0 else 1 - bits[-l]))
            num_true[ci] = t
            if t == 0:
                where[ci] = len(unsat)
                unsat.append(ci)

        def true_lit(v):
            return v if bits[v] else -v

        def break_count(v):
            return sum(1 for ci in occ[idx(true_lit(v))] if num_true[ci] == 1)

        flips = 0
        while unsat:
            if flips >= max_flips:
                return None, flips
            c = clauses[unsat[rng.randrange(len(unsat))]]
            if rng.random() < p_noise:
                v = abs(c[rng.randrange(len(c))])
            else:
                scores = [(break_count(abs(l)), abs(l)) for l in c]
                best = min(s for s, _ in scores)
                ties = [v for s, v in scores if s == best]
                v = ties[rng.randrange(len(ties))] if len(ties) > 1 else ties[0]
            flips += 1
            was_true = true_lit(v)
            bits[v] ^= 1
            for ci in occ[idx(-was_true)]:
                num_true[ci] += 1
                if num_true[ci] == 1:
                    last = unsat.pop()
                    if last != ci:
                        unsat[where[ci]] = last
                        where[last] = where[ci]
                    where[ci] = -1
            for ci in occ[idx(was_true)]:
                num_true[ci] -= 1
                if num_true[ci] == 0:
                    where[ci] = len(unsat)
                    unsat.append(ci)
        return bits[1:], flips


def _shrink_flips(f: Formula, candidate: Assignment, model: Assignment) -> tuple[Assignment, int]:
    """Greedily revert bits to the candidate's values while the model stays valid."""
    bits = list(model.bits)
    checks = 0
    changed = True
    while changed:
        changed = False
        for i, want in enumerate(candidate.bits):
            if bits[i] != want:
                bits[i] = want
                checks += 1
                if evaluate(f, Assignment(tuple(bits))):
                    changed = True
                else:
                    bits[i] = 1 - want
    return Assignment(tuple(bits)), checks


def repair(f: Formula, candidate: Assignment, budget: Budget = Budget(), seed: int = 0,
           p_noise: float = 0.5, restarts: int = 10) -> RepairOutcome:
    """Turn ``candidate`` into a nearby satisfying assignment.

    Local search restarts from the candidate up to ``restarts`` times; if it
    stalls, a DPLL call using the candidate bits as preferred polarity takes
    over. The result is then greedily shrunk back toward the candidate.
    """
    if len(candidate) != f.num_vars:
        raise ValueError(f"assignment length {len(candidate)} does not match {f.num_vars} variables")
    t0 = time.perf_counter()
    if evaluate(f, candidate):
        return RepairOutcome(RepairStatus.REPAIRED, candidate, 0, time.perf_counter() - t0, 0)
    rng = random.Random(seed)
    deadline = budget.deadline()
    steps = 0
    model = None
    ls = _LocalSearch(f)
    per_restart = max(1, budget.steps // (2 * max(restarts, 1)))
    for _ in range(restarts):
        if deadline is not None and time.monotonic() > deadline:
            break
        found, used = ls.run(candidate.bits, rng, per_restart, p_noise)
        steps += used
        if found is not None:
            model = Assignment(tuple(found))
            break
    if model is None:
        remaining = Budget(max(budget.steps - steps, 1), budget.wall_secs)
        out = _run_dpll(f, (), rng, remaining, polarity_hint=candidate, deadline=deadline)
        steps += out.steps
        if out.status is not SolveStatus.SAT:
            return RepairOutcome(RepairStatus.FAILED, None, 0, time.perf_counter() - t0, steps)
        model = out.model
    model, checks = _shrink_flips(f, candidate, model)
    steps += checks
    return RepairOutcome(RepairStatus.REPAIRED, model, candidate.hamming(model),
                         time.perf_counter() - t0, steps)


def brute_force_solutions(f: Formula) -> set[Assignment]:
    """Every satisfying assignment, by exhaustive enumeration (num_vars <= 20)."""
    n = f.num_vars
    if n > BRUTE_FORCE_MAX_VARS:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_MAX_VARS} variables, got {n}")
    codes = np.arange(1 << n, dtype=np.int64)
    # column i holds variable i+1, variable 1 being the most significant bit
    table = ((codes[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(bool)
    ok = np.ones(1 << n, dtype=bool)
    for clause in f.signed_clauses:
        sat = np.zeros(1 << n, dtype=bool)
        for lit in clause:
            col = table[:, abs(lit) - 1]
            sat |= col if lit > 0 else ~col
        ok &= sat
    return {Assignment(tuple(int(b) for b in row)) for row in table[ok]}
