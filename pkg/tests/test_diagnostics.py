import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from probcomb.core import Mode, Probability
from probcomb.diagnostics import (
    DiagnosticReport,
    broad_chain,
    cohen_complementarity_check,
    implied_evidence_comparison,
)
from probcomb.errors import ZeroConsequence

R = Mode.EXACT_RATIONAL


class TestBroadChain:
    def test_four_consequences(self):
        r = broad_chain(0.5, [0.8] * 4)
        assert r.raw_value == pytest.approx(1.2207, abs=1e-4)
        assert not r.valid
        assert r.overflow_index == 4
        assert [round(s["raw_value"], 7) for s in r.steps] == [0.625, 0.78125, 0.9765625, 1.2207031]
        assert r.steps[-1]["denominator"] == pytest.approx(0.4096)

    def test_exact(self):
        r = broad_chain(Probability("0.5", R), [Probability("0.8", R)] * 4)
        assert r.raw_value == Fraction(625, 512)

    def test_single_division(self):
        r = broad_chain(0.5, [0.9])
        assert r.raw_value == pytest.approx(0.5556, abs=1e-4)
        assert r.valid and r.overflow_index is None

    def test_certain_consequence(self):
        r = broad_chain(0.37, [1.0])
        assert r.raw_value == pytest.approx(0.37) and r.valid

    def test_zero_consequence(self):
        with pytest.raises(ZeroConsequence):
            broad_chain(0.5, [0.8, 0.0])

    def test_first_overflow_reported(self):
        r = broad_chain(0.9, [0.5, 0.99, 0.99])
        assert r.overflow_index == 1

    @given(
        st.fractions(0, 1, max_denominator=50),
        st.lists(st.fractions(Fraction(1, 50), 1, max_denominator=50), min_size=1, max_size=10),
    )
    def test_never_decreases(self, prior, cs):
        r = broad_chain(Probability(prior, R), [Probability(c, R) for c in cs])
        values = [prior] + [s["raw_value"] for s in r.steps]
        assert all(a <= b for a, b in zip(values, values[1:]))

    def test_report_invariants(self):
        with pytest.raises(ValueError):
            DiagnosticReport(1.5, True)
        with pytest.raises(ValueError):
            DiagnosticReport(0.5, False, 1)


class TestCohenCheck:
    def test_flawed(self):
        r = cohen_complementarity_check([0.25, 0.25], True)
        assert r.detail["sides"] == pytest.approx((0.4375, 0.9375))
        assert r.detail["defect"] == pytest.approx(0.375)
        assert not r.valid
        assert r.overflow_index == 2

    def test_rule(self):
        r = cohen_complementarity_check([0.25, 0.25], False)
        assert r.detail["sides"] == pytest.approx((0.0625, 0.9375))
        assert r.detail["defect"] == 0
        assert r.valid and r.raw_value == pytest.approx(1)

    @pytest.mark.parametrize("flawed", [True, False])
    def test_symmetric_point(self, flawed):
        assert cohen_complementarity_check([0.5], flawed).detail["defect"] == 0

    def test_high_side_flipped(self):
        r = cohen_complementarity_check([Probability("0.75", R)] * 2, False)
        assert r.detail["sides"] == [0.9375, 0.0625]

    @given(st.lists(st.fractions(0, Fraction(1, 2), max_denominator=64), min_size=1, max_size=6))
    def test_rule_always_complementary(self, ts):
        r = cohen_complementarity_check([Probability(t, R) for t in ts], False)
        assert r.raw_value == 1 and r.valid

    def test_to_dict(self):
        d = cohen_complementarity_check([0.25, 0.25], True).to_dict()
        assert d["valid"] is False and "defect" in d


class TestImpliedEvidence:
    def test_descartes(self):
        r = implied_evidence_comparison(0.4, 0.5, 0.9)
        assert float(r.cmpe_reading) == pytest.approx(0.7)
        assert float(r.bayes_reading) == pytest.approx(0.4444, abs=1e-4)

    def test_no_support(self):
        r = implied_evidence_comparison(0.37, 0.0, 1.0)
        assert float(r.cmpe_reading) == pytest.approx(0.37)
        assert float(r.bayes_reading) == pytest.approx(0.37)

    def test_coextensive(self):
        r = implied_evidence_comparison(0.4, 0.5, 0.4)
        assert float(r.bayes_reading) == 1.0


def test_random_chains_monotone():
    rng = random.Random(3)
    for _ in range(100):
        cs = [rng.uniform(0.01, 1) for _ in range(rng.randint(1, 12))]
        steps = [s["raw_value"] for s in broad_chain(rng.random(), cs).steps]
        assert all(a <= b for a, b in zip(steps, steps[1:]))
