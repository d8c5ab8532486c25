"""Suite quality criteria, phase accounting and the JSON report."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .cnf import Assignment

PHASES = ("generate", "verify", "repair", "select")


def credibility(candidates: Sequence[tuple[Assignment, bool]]) -> float:
    if not candidates:
        raise ValueError("credibility of an empty candidate list is undefined")
    return sum(1 for _, ok in candidates if ok) / len(candidates)


def uniqueness(members: Sequence[Assignment]) -> float:
    if not members:
        raise ValueError("uniqueness of an empty suite is undefined")
    return len(set(members)) / len(members)


def marginal_entropy(members: Sequence[Assignment]) -> tuple[list[float], float]:
    """Per-variable binary entropy (bits) of the suite's marginals, and their mean."""
    if not members:
        raise ValueError("entropy of an empty suite is undefined")
    n = len(members[0])
    if any(len(a) != n for a in members):
        raise ValueError("members have different lengths")
    if n == 0:
        return [], 0.0
    p = np.asarray([a.bits for a in members], dtype=float).mean(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -(p * np.log2(p) + (1 - p) * np.log2(1 - p))
    h = np.nan_to_num(h, nan=0.0)
    per_var = [float(x) for x in np.clip(h, 0.0, 1.0)]
    return per_var, float(np.mean(per_var))


class PhaseTimer:
    """Accumulates cost per phase, in seconds ("wall") or work units ("steps").

    In steps mode every charge is an explicit count (candidates drawn,
    evaluate calls, solver/local-search steps, NCD evaluations), which
    keeps reports reproducible. Work outside the four phases (seed
    solving, bookkeeping) lands only in the total.
    """

    def __init__(self, clock: str = "steps"):
        if clock not in ("wall", "steps"):
            raise ValueError(f"clock must be 'wall' or 'steps', not {clock!r}")
        self.clock = clock
        self.totals = {name: 0 for name in (*PHASES, "other")}
        self._start = time.perf_counter()
        self._active = False

    @contextmanager
    def phase(self, name: str):
        if name not in self.totals:
            raise KeyError(name)
        if self._active:
            raise RuntimeError("phases do not nest")
        self._active = True
        units = [0]
        t0 = time.perf_counter()
        try:
            yield units
        finally:
            self._active = False
            if self.clock == "wall":
                self.totals[name] += time.perf_counter() - t0
            else:
                self.totals[name] += units[0]

    def charge(self, name: str, units: int) -> None:
        with self.phase(name) as u:
            u[0] += units

    def snapshot(self) -> "Timings":
        t = self.totals
        if self.clock == "wall":
            total = time.perf_counter() - self._start
        else:
            total = sum(t.values())
        parts = sum(t[p] for p in PHASES)
        return Timings(t["generate"], t["verify"], t["repair"], t["select"], max(total, parts))


@dataclass
class Timings:
    generate: float = 0
    verify: float = 0
    repair: float = 0
    select: float = 0
    total: float = 0


@dataclass
class SuiteReport:
    formula_name: str
    mode: str
    status: str
    suite_size: int
    credibility: float
    uniqueness: float
    ncd: float
    entropy_per_var: list[float]
    entropy_mean: float
    timings: Timings
    timing_unit: str
    compressor: dict
    flags: list[str] = field(default_factory=list)
    counters: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "SuiteReport":
        raw = json.loads(text)
        raw["timings"] = Timings(**raw["timings"])
        return cls(**raw)
