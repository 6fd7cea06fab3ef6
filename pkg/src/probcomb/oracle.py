"""Brute-force checks of the combinators in exact rational arithmetic.

Nothing here calls the closed forms it verifies: union probabilities come
from enumerating every atom of a finite space of independent binary
events, and posteriors from a joint table.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .combinators import (
    BayesAlternative,
    bayes_total,
    cmpe_add,
    dpe_sub,
    derivation_identity,
)
from .core import Mode, Probability
from .diagnostics import cohen_complementarity_check
from .errors import SpaceTooLarge, ZeroEvidenceColumn

MAX_EVENTS = 20
BATTERY_MAX_EVENTS = 8
MAX_DENOMINATOR = 64

R = Mode.EXACT_RATIONAL


@dataclass(frozen=True)
class FiniteEventSpace:
    """``n`` mutually independent binary events with exact probabilities."""

    event_probs: tuple[Fraction, ...]

    def __post_init__(self):
        probs = tuple(Fraction(p) for p in self.event_probs)
        if len(probs) > MAX_EVENTS:
            raise SpaceTooLarge(f"{len(probs)} events; at most {MAX_EVENTS} can be enumerated")
        for p in probs:
            if not 0 <= p <= 1:
                raise ValueError(f"event probability out of range: {p}")
        object.__setattr__(self, "event_probs", probs)

    @property
    def n(self) -> int:
        return len(self.event_probs)

    def atoms(self) -> list[tuple[tuple[bool, ...], Fraction]]:
        """Every outcome with its mass, built by splitting on each event."""
        out: list[tuple[tuple[bool, ...], Fraction]] = [((), Fraction(1))]
        for p in self.event_probs:
            out = [
                (outcome + (hit,), mass * (p if hit else 1 - p))
                for outcome, mass in out
                for hit in (True, False)
            ]
        return out


def union_probability(space: FiniteEventSpace | Sequence) -> Fraction:
    """P(at least one event occurs), by summing atom masses."""
    if not isinstance(space, FiniteEventSpace):
        space = FiniteEventSpace(tuple(space))
    atoms = space.atoms()
    total = sum(mass for _, mass in atoms)
    if total != 1:
        raise AssertionError(f"atom masses sum to {total}")
    return sum((mass for outcome, mass in atoms if any(outcome)), Fraction(0))


@dataclass(frozen=True)
class JointTable:
    """Rows are alternatives, columns are (E, not E); masses sum to 1."""

    cells: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        cells = tuple((Fraction(e), Fraction(ne)) for e, ne in self.cells)
        if not cells:
            raise ValueError("joint table needs at least one alternative")
        if any(e < 0 or ne < 0 for e, ne in cells):
            raise ValueError("joint table cells must be non-negative")
        total = sum(e + ne for e, ne in cells)
        if total != 1:
            raise ValueError(f"joint table mass is {total}, not 1")
        object.__setattr__(self, "cells", cells)

    def alternatives(self) -> list[BayesAlternative]:
        """Marginal priors and conditional likelihoods P(E|A_i)."""
        out = []
        for e, ne in self.cells:
            prior = e + ne
            like = e / prior if prior else Fraction(0)
            out.append(BayesAlternative(Probability(prior, R), Probability(like, R)))
        return out


def posterior_from_table(table: JointTable, k: int) -> Fraction:
    column = sum(e for e, _ in table.cells)
    if column == 0:
        raise ZeroEvidenceColumn("no mass in the evidence column")
    return table.cells[k][0] / column


@dataclass(frozen=True)
class CaseFailure:
    case: int
    check: str
    operands: tuple[Fraction, ...]
    detail: str

    def __str__(self) -> str:
        ops = ", ".join(str(x) for x in self.operands)
        return f"case {self.case}: {self.check} failed for [{ops}]: {self.detail}"


@dataclass(frozen=True)
class BatteryReport:
    seed: int
    cases: int
    checks_run: int
    failure: CaseFailure | None = None

    @property
    def passed(self) -> bool:
        return self.failure is None


def check_case(probs: Sequence[Fraction], case: int = 0) -> tuple[int, CaseFailure | None]:
    """Run every identity on one operand list; return (checks run, first failure)."""
    probs = tuple(Fraction(p) for p in probs)
    ps = [Probability(p, R) for p in probs]
    checks = 0

    checks += 1
    closed = cmpe_add(ps).value
    enumerated = union_probability(probs)
    if closed != enumerated:
        return checks, CaseFailure(case, "cmpe_add vs union", probs, f"{closed} != {enumerated}")

    a = ps[0]
    for b in ps[1:] or ps:
        checks += 1
        lhs, rhs = derivation_identity(a, b)
        if lhs != rhs:
            return checks, CaseFailure(case, "derivation identity", (a.value, b.value), f"{lhs} != {rhs}")
        if b.value == 1:
            continue
        checks += 1
        back = dpe_sub(cmpe_add([a, b]), [b]).value
        if back != a.value:
            return checks, CaseFailure(case, "dpe(cmpe) round trip", (a.value, b.value), f"got {back}")

    if len(ps) > 1 and not any(p.value == 1 for p in ps[1:]):
        checks += 1
        back = dpe_sub(cmpe_add(ps), ps[1:]).value
        if back != a.value:
            return checks, CaseFailure(case, "n-ary dpe(cmpe) round trip", probs, f"got {back}")

    checks += 1
    low = [p if p <= Fraction(1, 2) else 1 - p for p in probs]
    report = cohen_complementarity_check([Probability(t, R) for t in low], False)
    if report.raw_value != 1:
        return checks, CaseFailure(case, "cohen complementarity", tuple(low), f"sides sum to {report.raw_value}")
    return checks, None


def check_table(cells, case: int = 0) -> tuple[int, CaseFailure | None]:
    """Posterior by table lookup vs the partition formula, for every row."""
    table = JointTable(tuple(cells))
    if sum(e for e, _ in table.cells) == 0:
        return 0, None
    alts = table.alternatives()
    for k in range(len(alts)):
        direct = posterior_from_table(table, k)
        formula = bayes_total(alts, k, exhaustive=True).value
        if direct != formula:
            flat = tuple(x for row in table.cells for x in row)
            return k + 1, CaseFailure(case, "bayes_total vs joint table", flat, f"{formula} != {direct}")
    return len(alts), None


def random_rational(rng: random.Random, max_denominator: int = MAX_DENOMINATOR) -> Fraction:
    d = rng.randint(1, max_denominator)
    return Fraction(rng.randint(0, d), d)


def random_property_battery(
    seed: int, cases: int, max_events: int = BATTERY_MAX_EVENTS
) -> BatteryReport:
    """Seeded exact-arithmetic checks; stops at the first counterexample.

    Each case draws 1..``max_events`` rationals with denominators up to 64
    and runs :func:`check_case`, then checks a random joint table of up to
    four alternatives with :func:`check_table`.
    """
    if cases < 1:
        raise ValueError("cases must be at least 1")
    rng = random.Random(seed)
    total = 0
    for i in range(cases):
        n = rng.randint(1, max_events)
        probs = [random_rational(rng) for _ in range(n)]
        run, failure = check_case(probs, i)
        total += run
        if failure is None:
            weights = [rng.randint(0, MAX_DENOMINATOR) for _ in range(2 * rng.randint(1, 4))]
            mass = sum(weights) or 1
            cells = [
                (Fraction(weights[j], mass), Fraction(weights[j + 1], mass))
                for j in range(0, len(weights), 2)
            ]
            if sum(weights):
                run, failure = check_table(cells, i)
                total += run
        if failure is not None:
            return BatteryReport(seed, i + 1, total, failure)
    return BatteryReport(seed, cases, total)
