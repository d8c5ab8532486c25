import random

import pytest

from conftest import satisfiable_instances
from snapsat.cnf import Assignment, Formula, evaluate
from snapsat.diversity import ncd_set
from snapsat.gen import random_kcnf
from snapsat.loop import (BatchRecord, Mode, SnapConfig, Status, run, run_mode, run_solver_only,
                          run_xor_only)


class TestConfig:
    def test_invariants(self):
        with pytest.raises(ValueError):
            SnapConfig(target_size=0)
        with pytest.raises(ValueError):
            SnapConfig(batch=0)
        with pytest.raises(ValueError):
            SnapConfig(seeds=1)
        assert SnapConfig(seeds=1, mode="solver-only").mode is Mode.SOLVER_ONLY


class TestRun:
    def test_single_solution(self):
        f = Formula.from_ints(3, [[1], [-2], [3]], name="one")
        suite, report = run(f, SnapConfig(target_size=10))
        assert suite.members == [Assignment((1, 0, 1))]
        assert report.status == Status.EXHAUSTED.value

    def test_empty_formula(self):
        f = Formula.from_ints(8, [])
        suite, report = run(f, SnapConfig(target_size=16, seed=2))
        assert len(suite) == 16
        assert len(set(suite.members)) == 16
        assert report.uniqueness == 1.0
        assert report.credibility == 1.0
        assert report.status == "complete"

    def test_unsat(self):
        suite, report = run(Formula.from_ints(2, [[1], [-1]]), SnapConfig())
        assert suite.members == []
        assert report.status == "unsat"

    def test_seed_timeout(self):
        f = random_kcnf(80, 340, 3, random.Random(0))
        suite, report = run(f, SnapConfig(budget_steps=3))
        assert suite.members == [] and report.status == "timeout"

    def test_suite_within_solutions(self):
        for f, sols in satisfiable_instances(8, (6, 13), (2, 4.2), seed=77):
            suite, report = run(f, SnapConfig(target_size=12, seed=3, batch=8))
            assert suite.members
            assert set(suite.members) <= sols
            assert len(set(suite.members)) == len(suite)
            assert len(suite) == min(12, len(sols))
            if len(sols) < 12:
                assert report.status == "exhausted"

    def test_target_one_truncates_seeds(self):
        suite, _ = run(Formula.from_ints(5, []), SnapConfig(target_size=1))
        assert len(suite) == 1

    def test_argmax_replay(self):
        f = random_kcnf(14, 30, 3, random.Random(4))
        trace: list[BatchRecord] = []
        suite, report = run(f, SnapConfig(target_size=20, seed=9, batch=6), trace)
        assert trace
        for rec in trace:
            scores = [ncd_set([*rec.suite_before, c]) for c in rec.survivors]
            assert list(rec.scores) == scores
            best = max(scores)
            assert rec.admitted == scores.index(best)

    def test_growth_is_monotone(self):
        f = random_kcnf(12, 20, 3, random.Random(6))
        trace: list[BatchRecord] = []
        suite, _ = run(f, SnapConfig(target_size=15, seed=1, batch=4), trace)
        for prev, nxt in zip(trace, trace[1:]):
            assert list(nxt.suite_before[: len(prev.suite_before)]) == list(prev.suite_before)
        for rec in trace:
            assert list(suite.members[: len(rec.suite_before)]) == list(rec.suite_before)

    def test_deterministic(self):
        f = random_kcnf(15, 40, 3, random.Random(10))
        cfg = SnapConfig(target_size=15, seed=5, batch=8)
        s1, r1 = run(f, cfg)
        s2, r2 = run(f, cfg)
        assert s1.members == s2.members
        assert r1.to_json() == r2.to_json()

    def test_step_timings(self):
        f = random_kcnf(15, 45, 3, random.Random(12))
        _, r = run(f, SnapConfig(target_size=12, seed=1, batch=5))
        t = r.timings
        assert r.timing_unit == "steps"
        assert t.generate + t.verify + t.repair + t.select <= t.total
        assert t.generate == r.counters["candidates"] == t.verify

    def test_doubled_batch_doubles_generate_steps(self):
        # empty formula over 16 vars: 7 atomics give 119 combinations, so every
        # batch of up to 64 fills and each iteration admits exactly one member
        f = Formula.from_ints(16, [])
        r1 = run(f, SnapConfig(target_size=14, seeds=8, batch=16, seed=3))[1]
        r2 = run(f, SnapConfig(target_size=14, seeds=8, batch=32, seed=3))[1]
        assert r1.counters["iterations"] == r2.counters["iterations"] == 6
        assert r2.timings.generate == 2 * r1.timings.generate

    def test_wall_clock(self):
        f = random_kcnf(12, 30, 3, random.Random(2))
        _, r = run(f, SnapConfig(target_size=20, clock="wall"))
        t = r.timings
        assert r.timing_unit == "seconds"
        assert 0 < t.generate + t.verify + t.repair + t.select <= t.total


class TestBaselines:
    def test_xor_only_log(self):
        for f, sols in satisfiable_instances(6, (8, 12), (2, 4), seed=88):
            log, report = run_xor_only(f, SnapConfig(target_size=40, seed=2))
            assert 0 <= report.credibility <= 1
            seen = set()
            for cand, ok, dup in log.entries:
                assert ok == evaluate(f, cand)
                assert dup == (cand in seen)
                seen.add(cand)
            assert {c for c, ok, _ in log.entries if ok} <= sols
            valid = sum(ok for _, ok, _ in log.entries)
            assert report.credibility == valid / len(log.entries)

    def test_xor_only_unsat(self):
        log, report = run_xor_only(Formula.from_ints(1, [[1], [-1]]))
        assert log.entries == [] and report.status == "unsat"

    def test_solver_only(self):
        f = random_kcnf(12, 30, 3, random.Random(3))
        suite, report = run_solver_only(f, SnapConfig(target_size=10, seed=4))
        assert len(suite) == len(set(suite.members)) == 10
        assert all(evaluate(f, a) for a in suite.members)
        assert report.credibility == 1.0 and report.mode == "solver-only"

    def test_solver_only_target_one_is_single_solve(self):
        f = random_kcnf(12, 30, 3, random.Random(3))
        suite, _ = run_solver_only(f, SnapConfig(target_size=1, seed=4))
        assert len(suite) == 1 and evaluate(f, suite.members[0])

    def test_solver_only_exhausts(self):
        suite, report = run_solver_only(Formula.from_ints(2, []), SnapConfig(target_size=10))
        assert len(suite) == 4 and report.status == "exhausted"

    def test_run_mode_dispatch(self):
        f = Formula.from_ints(6, [[1, 2]])
        for mode in Mode:
            members, report = run_mode(f, SnapConfig(target_size=6, mode=mode))
            assert report.mode == mode.value
            assert members
