"""XOR mutation of known solutions into fresh, unverified candidates."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from math import comb
from typing import Iterable, Iterator, Sequence

from .cnf import Assignment

DEFAULT_MAX_LEVEL = 6

# Deltas share the assignment representation: a length-n 0/1 tuple.
Delta = Assignment


def xor(a: Assignment, b: Assignment) -> Delta:
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    return Assignment(tuple(x ^ y for x, y in zip(a.bits, b.bits)))


def atomic_deltas(base: Assignment, neighbors: Iterable[Assignment]) -> list[Delta]:
    """Nonzero ``base ^ s`` for each neighbor, deduplicated in first-seen order."""
    out: dict[Delta, None] = {}
    for s in neighbors:
        d = xor(base, s)
        if any(d.bits):
            out.setdefault(d)
    return list(out)


@dataclass(frozen=True)
class MutationPool:
    base: Assignment
    atomics: tuple[Delta, ...]
    max_level: int = DEFAULT_MAX_LEVEL

    def __post_init__(self):
        if self.max_level < 1:
            raise ValueError("max_level must be >= 1")
        n = len(self.base)
        seen = set()
        for d in self.atomics:
            if len(d) != n:
                raise ValueError("delta length does not match base")
            if not any(d.bits):
                raise ValueError("zero delta cannot be atomic")
            if d in seen:
                raise ValueError("duplicate atomic delta")
            seen.add(d)

    @classmethod
    def build(cls, base: Assignment, neighbors: Iterable[Assignment],
              max_level: int = DEFAULT_MAX_LEVEL) -> "MutationPool":
        return cls(base, tuple(atomic_deltas(base, neighbors)), max_level)


def combine_candidates(pool: MutationPool, limit: int | None = None,
                       max_scan: int | None = None) -> Iterator[Assignment]:
    """Lazily yield ``base ^ d_i1 ^ ... ^ d_ik`` for k = 2..max_level.

    Levels ascend; combinations within a level are index-lexicographic.
    Candidates equal to the base, to a single-delta neighbor, or to an
    earlier emission are skipped. ``limit`` bounds emissions, ``max_scan``
    bounds combinations examined (duplicates included).
    """
    base = pool.base
    seen = {base, *(xor(base, d) for d in pool.atomics)}
    emitted = scanned = 0
    if limit is not None and limit <= 0:
        return
    for k in range(2, min(pool.max_level, len(pool.atomics)) + 1):
        for combo in itertools.combinations(pool.atomics, k):
            if max_scan is not None and scanned >= max_scan:
                return
            scanned += 1
            cand = reduce(xor, combo, base)
            if cand in seen:
                continue
            seen.add(cand)
            yield cand
            emitted += 1
            if limit is not None and emitted >= limit:
                return


def candidate_count_bound(m: int, max_level: int) -> int:
    """Upper bound on emissions for a pool of m atomics, before dedup."""
    return sum(comb(m, k) for k in range(2, min(max_level, m) + 1))
