import itertools
import math
import time

import pytest

from snapsat.cnf import Assignment
from snapsat.metrics import (PhaseTimer, SuiteReport, Timings, credibility, marginal_entropy,
                             uniqueness)


def A(s):
    return Assignment(tuple(int(c) for c in s))


def test_credibility():
    a, b = A("01"), A("10")
    assert credibility([(a, True), (b, True)]) == 1.0
    assert credibility([(a, False), (b, False)]) == 0.0
    assert credibility([(a, True), (b, True), (a, True), (b, False)]) == 0.75
    with pytest.raises(ValueError):
        credibility([])


def test_uniqueness():
    a, b = A("01"), A("10")
    assert uniqueness([a, b]) == 1.0
    assert uniqueness([a] * 5) == 1 / 5
    assert uniqueness([a, a, b]) == 2 / 3
    with pytest.raises(ValueError):
        uniqueness([])


class TestEntropy:
    def test_identical_members(self):
        per_var, mean = marginal_entropy([A("0110")] * 4)
        assert per_var == [0.0] * 4 and mean == 0.0

    def test_half(self):
        per_var, _ = marginal_entropy([A("10"), A("00")])
        assert per_var == [1.0, 0.0]

    def test_quarter(self):
        p = 0.25
        expected = -(p * math.log2(p) + (1 - p) * math.log2(1 - p))  # 0.8112781244591328
        per_var, mean = marginal_entropy([A("1"), A("0"), A("0"), A("0")])
        assert per_var[0] == pytest.approx(expected, abs=1e-12)
        assert per_var[0] == pytest.approx(0.811278, abs=1e-6)

    def test_full_space_is_one(self):
        members = [Assignment(b) for b in itertools.product((0, 1), repeat=6)]
        per_var, mean = marginal_entropy(members)
        assert per_var == [1.0] * 6 and mean == 1.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            marginal_entropy([A("01"), A("011")])


class TestPhaseTimer:
    def test_zero(self):
        t = PhaseTimer("steps").snapshot()
        assert (t.generate, t.verify, t.repair, t.select, t.total) == (0, 0, 0, 0, 0)

    def test_steps_accumulate(self):
        timer = PhaseTimer("steps")
        timer.charge("generate", 3)
        with timer.phase("verify") as u:
            u[0] += 2
        timer.charge("other", 10)
        t = timer.snapshot()
        assert (t.generate, t.verify, t.total) == (3, 2, 15)

    def test_wall_parts_below_total(self):
        timer = PhaseTimer("wall")
        for name in ("generate", "verify", "repair", "select"):
            with timer.phase(name):
                time.sleep(0.002)
        time.sleep(0.002)
        t = timer.snapshot()
        assert t.generate > 0
        assert t.generate + t.verify + t.repair + t.select <= t.total

    def test_no_nesting(self):
        timer = PhaseTimer()
        with timer.phase("verify"):
            with pytest.raises(RuntimeError):
                with timer.phase("repair"):
                    pass

    def test_bad_clock(self):
        with pytest.raises(ValueError):
            PhaseTimer("cpu")


def test_report_json_roundtrip():
    r = SuiteReport(
        formula_name="x", mode="snap", status="complete", suite_size=3, credibility=1.0,
        uniqueness=1.0, ncd=0.7342105263157894, entropy_per_var=[0.9182958340544896, 0.0],
        entropy_mean=0.4591479170272448, timings=Timings(1, 2, 3, 4, 12), timing_unit="steps",
        compressor={"algorithm": "zlib", "level": 9}, flags=["w"], counters={"iterations": 2},
    )
    again = SuiteReport.from_json(r.to_json())
    assert again == r
    assert again.to_json() == r.to_json()
