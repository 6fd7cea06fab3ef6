"""Detectors for the known pathologies of probability bookkeeping.

* Broad's chain ``P(H) / prod(c_i)`` for a hypothesis implying many
  verified consequences: the denominator shrinks until the quotient
  exceeds 1.
* Running non-linear addition on both sides of a binary question, which
  breaks complementarity.
* The two readings of an implied piece of evidence (weight-bearing vs
  extensional), reported side by side.

Reports may hold a raw value above 1; that value is never wrapped in a
:class:`~probcomb.core.Probability`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .combinators import bayes_implied, cmpe_add, cohen_binary_combine
from .core import Mode, Probability, coerce, complement, product
from .errors import ZeroConsequence


@dataclass(frozen=True)
class DiagnosticReport:
    raw_value: float | Fraction
    valid: bool
    overflow_index: int | None = None
    steps: tuple[dict, ...] = field(default_factory=tuple)
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.valid != (self.raw_value <= 1):
            raise ValueError("valid must equal raw_value <= 1")
        if (self.overflow_index is None) != self.valid:
            raise ValueError("overflow_index is present exactly when the report is invalid")

    def to_dict(self) -> dict:
        out = {"raw_value": float(self.raw_value), "valid": self.valid}
        if self.overflow_index is not None:
            out["overflow_index"] = self.overflow_index
        out["steps"] = [dict(s) for s in self.steps]
        out.update(self.detail)
        return out


def _plain(p: Probability):
    return p.value if p.mode is Mode.EXACT_RATIONAL else float(p.value)


def broad_chain(prior, consequence_probs: Sequence, mode: Mode | str | None = None) -> DiagnosticReport:
    """Evaluate ``prior / (c_1 * ... * c_n)`` and flag where it passes 1.

    ``consequence_probs`` are the already-multiplied chain factors
    ``c_1|f, c_2|c_1 f, ...``. Overflow is reported, not raised.
    """
    items, mode = coerce([prior, *consequence_probs], mode)
    h, cs = _plain(items[0]), [_plain(c) for c in items[1:]]
    steps = []
    denom = Fraction(1) if mode is Mode.EXACT_RATIONAL else 1.0
    raw = h
    overflow = None
    for i, c in enumerate(cs, start=1):
        if c == 0:
            raise ZeroConsequence(f"consequence {i} has probability 0")
        denom = denom * c
        raw = h / denom
        if overflow is None and raw > 1:
            overflow = i
        steps.append(
            {"index": i, "factor": float(c), "denominator": float(denom), "raw_value": float(raw)}
        )
    return DiagnosticReport(raw, raw <= 1, overflow, tuple(steps))


def _cohen_sides(items: list[Probability], flawed: bool):
    half = Fraction(1, 2)
    if flawed:
        return cmpe_add(items), cmpe_add([complement(t) for t in items]), "cmpe on both sides"
    if all(t <= half for t in items):
        high, low = cohen_binary_combine(items)
        return low, high, "product on the stated (low) side, cmpe on the other"
    if all(t >= half for t in items):
        high, low = cohen_binary_combine([complement(t) for t in items])
        return high, low, "cmpe on the stated (high) side, product on the other"
    # witnesses disagree about which side is favoured
    low = product(items)
    return low, complement(low), "mixed testimonies: product on the stated side"


def cohen_complementarity_check(
    testimonies: Sequence, treat_both_sides_as_cmpe: bool, mode: Mode | str | None = None
) -> DiagnosticReport:
    """Check that the two sides of a binary question stay complementary.

    ``side_a`` is the side the testimonies speak for. With
    ``treat_both_sides_as_cmpe`` both sides are summed non-linearly (the
    flawed procedure); otherwise the low side multiplies and the high side
    takes the non-linear sum, which always complements it.

    ``raw_value`` is ``side_a + side_b``; the defect ``|raw_value - 1|``
    and the sides are in ``detail``. ``overflow_index`` counts the
    testimonies after which the sum first exceeds 1.
    """
    items, mode = coerce(testimonies, mode)
    if not items:
        raise ValueError("need at least one testimony")
    steps = []
    overflow = None
    for k in range(1, len(items) + 1):
        a, b, rule = _cohen_sides(items[:k], treat_both_sides_as_cmpe)
        raw = _plain(a) + _plain(b)
        if overflow is None and raw > 1:
            overflow = k
        steps.append(
            {"testimonies": k, "rule": rule, "side_a": float(a), "side_b": float(b), "sum": float(raw)}
        )
    defect = abs(raw - 1)
    return DiagnosticReport(
        raw,
        raw <= 1,
        overflow,
        tuple(steps),
        {"sides": [float(a), float(b)], "defect": float(defect)},
    )


@dataclass(frozen=True)
class ImpliedEvidenceReadings:
    """Both readings of evidence implied by the hypothesis; not reconciled."""

    cmpe_reading: Probability
    bayes_reading: Probability

    def to_dict(self) -> dict:
        return {"cmpe_reading": float(self.cmpe_reading), "bayes_reading": float(self.bayes_reading)}


def implied_evidence_comparison(
    prior, weight_bearing_support, evidence_total, mode: Mode | str | None = None
) -> ImpliedEvidenceReadings:
    items, mode = coerce([prior, weight_bearing_support, evidence_total], mode)
    h, w, e = items
    return ImpliedEvidenceReadings(cmpe_add([h, w]), bayes_implied(h, e))
