"""The SNAP search and its two baselines (XOR-only and solver-only)."""

from __future__ import annotations

import enum
import random
import time
from dataclasses import dataclass, field, replace

from .cnf import Assignment, Formula, evaluate
from .diversity import DEFAULT_COMPRESSOR, CompressorConfig, ncd_set, ncd_set_diag
from .metrics import PhaseTimer, SuiteReport, credibility, marginal_entropy, uniqueness
from .mutate import DEFAULT_MAX_LEVEL, MutationPool, combine_candidates
from .solver import Budget, RepairStatus, SolveStatus, enumerate_models, repair

# combinations examined per drawn candidate before a pool is declared dry
SCAN_FACTOR = 64


class Mode(str, enum.Enum):
    SNAP = "snap"
    XOR_ONLY = "xor-only"
    SOLVER_ONLY = "solver-only"


class Status(str, enum.Enum):
    COMPLETE = "complete"      # target size reached
    EXHAUSTED = "exhausted"    # no further solution could be found
    UNSAT = "unsat"
    TIMEOUT = "timeout"        # budget ran out before the target


@dataclass(frozen=True)
class SnapConfig:
    target_size: int = 100
    seeds: int = 8
    batch: int = 32
    max_level: int = DEFAULT_MAX_LEVEL
    budget_steps: int = 200_000
    wall_secs: float | None = None
    seed: int = 0
    compressor: CompressorConfig = DEFAULT_COMPRESSOR
    mode: Mode = Mode.SNAP
    clock: str = "steps"
    p_noise: float = 0.5
    restarts: int = 10

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.target_size < 1:
            raise ValueError("target_size must be >= 1")
        if self.batch < 1:
            raise ValueError("batch must be >= 1")
        if self.mode is not Mode.SOLVER_ONLY and self.seeds < 2:
            raise ValueError("XOR modes need at least 2 seed solutions")
        if self.seeds < 1:
            raise ValueError("seeds must be >= 1")

    @property
    def budget(self) -> Budget:
        return Budget(self.budget_steps, self.wall_secs)


@dataclass
class TestSuite:
    __test__ = False  # not a pytest class

    formula_name: str
    members: list[Assignment] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class BatchRecord:
    """One admission decision, kept so the greedy choice can be replayed."""

    suite_before: tuple[Assignment, ...]
    survivors: tuple[Assignment, ...]
    scores: tuple[float, ...]
    admitted: int


@dataclass
class CandidateLog:
    entries: list[tuple[Assignment, bool, bool]] = field(default_factory=list)  # (candidate, valid, duplicate)

    @property
    def candidates(self) -> list[Assignment]:
        return [a for a, _, _ in self.entries]


class _Seeder:
    """Draws fresh solver models, remembering why the last draw stopped."""

    def __init__(self, f: Formula, cfg: SnapConfig, rng: random.Random, timer: PhaseTimer,
                 phase: str = "other"):
        self.f, self.cfg, self.rng, self.timer, self.phase = f, cfg, rng, timer, phase
        self.last_status: SolveStatus | None = None

    def draw(self, k: int, exclude=()) -> list[Assignment]:
        models = []
        with self.timer.phase(self.phase) as units:
            for out in enumerate_models(self.f, k, self.rng.getrandbits(64), self.cfg.budget, exclude):
                units[0] += out.steps
                self.last_status = out.status
                if out.status is SolveStatus.SAT:
                    models.append(out.model)
        return models


def _deadline(cfg: SnapConfig) -> float | None:
    return None if cfg.wall_secs is None else time.monotonic() + cfg.wall_secs


def _expired(deadline: float | None) -> bool:
    return deadline is not None and time.monotonic() > deadline


def _report(f: Formula, cfg: SnapConfig, status: Status, members: list[Assignment],
            checked: list[tuple[Assignment, bool]], timer: PhaseTimer,
            flags: list[str], counters: dict) -> SuiteReport:
    flags = list(f.warnings) + flags
    if members:
        ncd, ncd_flags = ncd_set_diag(members, cfg.compressor)
        flags += ncd_flags
        per_var, mean = marginal_entropy(members)
        uniq = uniqueness(members)
    else:
        ncd, per_var, mean, uniq = 0.0, [], 0.0, 1.0
    cred = credibility(checked) if checked else 1.0
    return SuiteReport(
        formula_name=f.name,
        mode=cfg.mode.value,
        status=status.value,
        suite_size=len(members),
        credibility=cred,
        uniqueness=uniq,
        ncd=ncd,
        entropy_per_var=per_var,
        entropy_mean=mean,
        timings=timer.snapshot(),
        timing_unit="seconds" if timer.clock == "wall" else "steps",
        compressor=cfg.compressor.to_dict(),
        flags=flags,
        counters=counters,
    )


def _seed_failure(seeder: _Seeder) -> Status:
    return Status.UNSAT if seeder.last_status is SolveStatus.UNSAT else Status.TIMEOUT


def run(f: Formula, cfg: SnapConfig = SnapConfig(),
        trace: list[BatchRecord] | None = None) -> tuple[TestSuite, SuiteReport]:
    """Grow a valid, duplicate-free suite, greedily maximizing multiset NCD.

    Each iteration mutates the current suite into a batch of candidates,
    verifies them, repairs failures, and admits the survivor with the
    highest ``ncd_set(suite + [c])`` (lowest index on ties). Two empty
    batches in a row trigger one fresh solver call; if that finds nothing
    the solution space is treated as exhausted.
    """
    if cfg.mode is not Mode.SNAP:
        cfg = replace(cfg, mode=Mode.SNAP)
    rng = random.Random(cfg.seed)
    timer = PhaseTimer(cfg.clock)
    deadline = _deadline(cfg)
    seeder = _Seeder(f, cfg, rng, timer)
    counters = {"iterations": 0, "candidates": 0, "valid_raw": 0, "repaired": 0,
                "repair_failed": 0, "fallback_solves": 0}
    flags: list[str] = []

    suite = seeder.draw(cfg.seeds)[: cfg.target_size]
    if not suite:
        status = _seed_failure(seeder)
        return TestSuite(f.name), _report(f, cfg, status, [], [], timer, flags, counters)
    if len(suite) < cfg.seeds and seeder.last_status is SolveStatus.TIMEOUT:
        flags.append("seed_phase_timeout")
    known = set(suite)
    status = Status.COMPLETE
    stale = 0
    while len(suite) < cfg.target_size:
        if _expired(deadline):
            status = Status.TIMEOUT
            break
        counters["iterations"] += 1
        base = suite[rng.randrange(len(suite))]
        neighbors = [s for s in suite if s != base]
        rng.shuffle(neighbors)
        pool = MutationPool.build(base, neighbors, cfg.max_level)

        with timer.phase("generate") as units:
            drawn = []
            for cand in combine_candidates(pool, max_scan=cfg.batch * SCAN_FACTOR):
                if cand not in known:
                    drawn.append(cand)
                    if len(drawn) == cfg.batch:
                        break
            units[0] += len(drawn)
        counters["candidates"] += len(drawn)

        survivors: list[Assignment] = []
        taken = set()
        for cand in drawn:
            with timer.phase("verify") as units:
                ok = evaluate(f, cand)
                units[0] += 1
            if ok:
                counters["valid_raw"] += 1
                model = cand
            else:
                with timer.phase("repair") as units:
                    out = repair(f, cand, cfg.budget, rng.getrandbits(64), cfg.p_noise, cfg.restarts)
                    units[0] += out.steps
                if out.status is not RepairStatus.REPAIRED:
                    counters["repair_failed"] += 1
                    continue
                counters["repaired"] += 1
                model = out.model
            if model in known or model in taken:
                continue
            taken.add(model)
            survivors.append(model)

        if survivors:
            stale = 0
            with timer.phase("select") as units:
                scores = [ncd_set([*suite, c], cfg.compressor) for c in survivors]
                units[0] += len(scores)
            best = max(range(len(scores)), key=lambda i: (scores[i], -i))
            if trace is not None:
                trace.append(BatchRecord(tuple(suite), tuple(survivors), tuple(scores), best))
            suite.append(survivors[best])
            known.add(survivors[best])
            continue

        stale += 1
        if stale < 2:
            continue
        counters["fallback_solves"] += 1
        fresh = seeder.draw(1, exclude=suite)
        if not fresh:
            status = Status.EXHAUSTED if seeder.last_status is SolveStatus.UNSAT else Status.TIMEOUT
            break
        stale = 0
        suite.append(fresh[0])
        known.add(fresh[0])

    if status is Status.COMPLETE and len(suite) < cfg.target_size:
        status = Status.EXHAUSTED
    checked = [(a, True) for a in suite]
    report = _report(f, cfg, status, suite, checked, timer, flags, counters)
    return TestSuite(f.name, suite), report


def run_xor_only(f: Formula, cfg: SnapConfig = SnapConfig()) -> tuple[CandidateLog, SuiteReport]:
    """QuickSampler-style baseline: seeds plus raw XOR combinations, no repair.

    Each seed in turn serves as the base of a pool built from the others;
    the log keeps every emission with its validity and whether it repeats
    an earlier log entry. Stops after ``target_size`` log entries.
    """
    cfg = replace(cfg, mode=Mode.XOR_ONLY)
    rng = random.Random(cfg.seed)
    timer = PhaseTimer(cfg.clock)
    deadline = _deadline(cfg)
    seeder = _Seeder(f, cfg, rng, timer, phase="generate")
    log = CandidateLog()
    flags: list[str] = []

    seeds = seeder.draw(cfg.seeds)
    if not seeds:
        status = _seed_failure(seeder)
        return log, _report(f, cfg, status, [], [], timer, flags, {})
    seen: set[Assignment] = set()

    def record(cand: Assignment) -> None:
        with timer.phase("verify") as units:
            ok = evaluate(f, cand)
            units[0] += 1
        log.entries.append((cand, ok, cand in seen))
        seen.add(cand)

    for s in seeds[: cfg.target_size]:
        record(s)
    status = Status.COMPLETE
    for i, base in enumerate(seeds):
        if len(log.entries) >= cfg.target_size:
            break
        if _expired(deadline):
            status = Status.TIMEOUT
            break
        pool = MutationPool.build(base, seeds[:i] + seeds[i + 1:], cfg.max_level)
        remaining = cfg.target_size - len(log.entries)
        with timer.phase("generate") as units:
            batch = list(combine_candidates(pool, limit=remaining))
            units[0] += len(batch)
        for cand in batch:
            record(cand)
    if status is Status.COMPLETE and len(log.entries) < cfg.target_size:
        status = Status.EXHAUSTED
    counters = {"seeds": len(seeds), "duplicates": sum(1 for e in log.entries if e[2])}
    checked = [(a, ok) for a, ok, _ in log.entries]
    report = _report(f, cfg, status, log.candidates, checked, timer, flags, counters)
    return log, report


def run_solver_only(f: Formula, cfg: SnapConfig = SnapConfig()) -> tuple[TestSuite, SuiteReport]:
    """Control arm: every member comes from its own solver call."""
    cfg = replace(cfg, mode=Mode.SOLVER_ONLY)
    rng = random.Random(cfg.seed)
    timer = PhaseTimer(cfg.clock)
    deadline = _deadline(cfg)
    members: list[Assignment] = []
    last = None
    with timer.phase("generate") as units:
        for out in enumerate_models(f, cfg.target_size, rng.getrandbits(64), cfg.budget):
            units[0] += out.steps
            last = out.status
            if out.status is SolveStatus.SAT:
                members.append(out.model)
            if _expired(deadline):
                break
    checked = []
    for a in members:
        with timer.phase("verify") as units:
            checked.append((a, evaluate(f, a)))
            units[0] += 1
    if len(members) == cfg.target_size:
        status = Status.COMPLETE
    elif last is SolveStatus.UNSAT:
        status = Status.EXHAUSTED if members else Status.UNSAT
    else:
        status = Status.TIMEOUT
    counters = {"solver_calls": len(members) + (0 if status is Status.COMPLETE else 1)}
    report = _report(f, cfg, status, members, checked, timer, flags=[], counters=counters)
    return TestSuite(f.name, members), report


def run_mode(f: Formula, cfg: SnapConfig) -> tuple[list[Assignment], SuiteReport]:
    """Dispatch on ``cfg.mode``; returns the lines to write as samples."""
    if cfg.mode is Mode.XOR_ONLY:
        log, report = run_xor_only(f, cfg)
        return log.candidates, report
    if cfg.mode is Mode.SOLVER_ONLY:
        suite, report = run_solver_only(f, cfg)
    else:
        suite, report = run(f, cfg)
    return suite.members, report
