"""Named combination operators.

Bayes (simple, total partition, implied evidence), error products (MPE),
non-linear addition (cMPE) and subtraction (DPE), Laplace's rule of
succession, support transfer through carriers, and the binary testimony
rule for complementary hypotheses.

Every operator accepts an optional ``mode``; operands are converted to it
(defaulting to the mode of the first operand).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import (
    DEFAULT_TOLERANCE,
    TAIL_THRESHOLD,
    Mode,
    Probability,
    _log1m_exact,
    _warn_underflow,
    coerce,
    complement,
    log_space_product,
    product,
)
from .errors import (
    DivisionByZeroComplement,
    ImplicationViolated,
    NotDisfavoredSide,
    PartitionNotNormalized,
    SubtrahendExceedsMinuend,
    ZeroEvidenceProbability,
)

# slack for rounding noise when a DPE ratio lands a hair above 1
_DPE_ROUNDING_SLACK = 1e-12


@dataclass(frozen=True)
class SupportContribution:
    """A carrier with its own prior that passes ``transfer`` support on."""

    carrier_prior: Probability
    transfer: Probability

    def __post_init__(self):
        object.__setattr__(self, "carrier_prior", Probability.of(self.carrier_prior))
        object.__setattr__(self, "transfer", Probability.of(self.transfer))


@dataclass(frozen=True)
class BayesAlternative:
    prior: Probability
    likelihood: Probability

    def __post_init__(self):
        object.__setattr__(self, "prior", Probability.of(self.prior))
        object.__setattr__(self, "likelihood", Probability.of(self.likelihood))


def _arith(items: list[Probability], mode: Mode) -> list:
    # Fractions stay exact; the other modes do plain field arithmetic in floats
    if mode is Mode.EXACT_RATIONAL:
        return [p.value for p in items]
    return [float(p.value) for p in items]


def _wrap(x, mode: Mode) -> Probability:
    if mode is Mode.LOG_COMPLEMENT and isinstance(x, Fraction):
        return Probability(x, mode, _log1m_exact(x))
    return Probability(x, mode)


def cmpe_add(ps: Sequence, mode: Mode | str | None = None) -> Probability:
    """Non-linear addition: ``1 - prod(1 - p_i)``.

    The result is never below the largest operand and reaches 1 only
    when some operand is 1.
    """
    items, mode = coerce(ps, mode)
    if not items:
        raise ValueError("cmpe_add of an empty list")
    if mode is Mode.LOG_COMPLEMENT:
        return Probability(0.0, mode, math.fsum(p.log_complement for p in items))
    if mode is Mode.EXACT_RATIONAL:
        return Probability(1 - math.prod(1 - p.value for p in items), mode)
    err = math.prod(1.0 - p.value for p in items)
    if err == 0.0 and not any(p.is_one() for p in items):
        _warn_underflow("error product vanished; cMPE sum rounded to 1")
    # 1 - (1 - p) can lose the low bits of p; the exact sum is never below max(p)
    return Probability(max(1.0 - err, max(p.value for p in items)), mode)


def dpe_sub(minuend, subtrahends: Sequence, mode: Mode | str | None = None) -> Probability:
    """Non-linear subtraction: ``1 - (1 - minuend) / prod(1 - s_i)``.

    Exact inverse of :func:`cmpe_add`. Raises
    :class:`SubtrahendExceedsMinuend` when the result would be negative.
    """
    items, mode = coerce([minuend, *subtrahends], mode)
    m, subs = items[0], items[1:]
    if not subs:
        raise ValueError("dpe_sub needs at least one subtrahend")
    for s in subs:
        if s.is_one():
            raise DivisionByZeroComplement(
                "cannot subtract probability 1: its error probability is zero"
            )
    if mode is Mode.LOG_COMPLEMENT:
        lc = m.log_complement - math.fsum(s.log_complement for s in subs)
        if lc > 0:
            if lc > _DPE_ROUNDING_SLACK:
                raise SubtrahendExceedsMinuend(
                    f"{m} minus {[str(s) for s in subs]} is negative"
                )
            lc = 0.0
        return Probability(0.0, mode, lc)
    num = 1 - m.value
    den = math.prod(1 - s.value for s in subs)
    ratio = num / den
    if ratio > 1:
        if mode is Mode.EXACT_RATIONAL or ratio - 1 > _DPE_ROUNDING_SLACK:
            raise SubtrahendExceedsMinuend(
                f"{m} minus {[str(s) for s in subs]} is negative"
            )
        ratio = 1.0
    return Probability(1 - ratio, mode)


def mpe_error_product(errors: Sequence, mode: Mode | str | None = None) -> Probability:
    """Joint error probability of semantically independent channels.

    Take the complement for the combined confidence. Floating inputs in
    the tail are multiplied in log space; an underflow is reported with
    :class:`~probcomb.errors.UnderflowWarning`.
    """
    items, mode = coerce(errors, mode)
    if not items:
        raise ValueError("mpe_error_product of an empty list")
    if mode is Mode.FLOATING and any(0 < p.value < TAIL_THRESHOLD for p in items):
        return log_space_product(items, mode)
    return product(items, mode)


def bayes_posterior(prior, likelihood, alt_likelihood, mode: Mode | str | None = None) -> Probability:
    """P(H|E) from P(H), P(E|H) and P(E|not H)."""
    items, mode = coerce([prior, likelihood, alt_likelihood], mode)
    h, e_h, e_not_h = _arith(items, mode)
    joint = h * e_h
    total = joint + (1 - h) * e_not_h
    if total == 0:
        raise ZeroEvidenceProbability("total probability of the evidence is 0")
    return _wrap(joint / total, mode)


def bayes_total(
    alternatives: Sequence[BayesAlternative],
    k: int,
    *,
    exhaustive: bool = False,
    tolerance: float = DEFAULT_TOLERANCE,
    mode: Mode | str | None = None,
) -> Probability:
    """P(A_k|B) over a list of alternatives A_1..A_n.

    With ``exhaustive=True`` the priors must form a partition (sum to 1
    within ``tolerance``; exactly in rational mode).
    """
    if not alternatives:
        raise ValueError("bayes_total needs at least one alternative")
    if not 0 <= k < len(alternatives):
        raise IndexError(f"alternative index {k} out of range")
    flat = []
    for a in alternatives:
        flat += [a.prior, a.likelihood]
    items, mode = coerce(flat, mode)
    vals = _arith(items, mode)
    priors, likes = vals[0::2], vals[1::2]
    if exhaustive:
        s = sum(priors)
        off = s != 1 if mode is Mode.EXACT_RATIONAL else abs(s - 1) > tolerance
        if off:
            raise PartitionNotNormalized(f"priors sum to {s}, not 1")
    joints = [p * l for p, l in zip(priors, likes)]
    total = sum(joints) if mode is Mode.EXACT_RATIONAL else math.fsum(joints)
    if total == 0:
        raise ZeroEvidenceProbability("total probability of the evidence is 0")
    return _wrap(joints[k] / total, mode)


def bayes_implied(prior, evidence_total, mode: Mode | str | None = None) -> Probability:
    """P(H|E) = P(H) / P(E) when H implies E."""
    items, mode = coerce([prior, evidence_total], mode)
    h, e = _arith(items, mode)
    if e == 0:
        raise ZeroEvidenceProbability("P(E) is 0")
    if e < h:
        raise ImplicationViolated(f"P(E)={e} < P(H)={h}, yet H implies E")
    return _wrap(h / e, mode)


def laplace_succession(successes: int, trials: int, mode: Mode | str = Mode.FLOATING) -> Probability:
    """Rule of succession, ``(m + 1) / (n + 2)``."""
    for name, v in (("successes", successes), ("trials", trials)):
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise ValueError(f"{name} must be a non-negative integer, got {v!r}")
    if successes > trials:
        raise ValueError(f"successes ({successes}) exceed trials ({trials})")
    return _wrap(Fraction(successes + 1, trials + 2), Mode(mode))


def support_transfer(contributions: Sequence[SupportContribution], mode: Mode | str | None = None) -> Probability:
    """cMPE sum of ``carrier_prior * transfer`` over all carriers."""
    if not contributions:
        raise ValueError("support_transfer needs at least one contribution")
    flat = []
    for c in contributions:
        flat += [c.carrier_prior, c.transfer]
    items, mode = coerce(flat, mode)
    shares = [product(items[i:i + 2]) for i in range(0, len(items), 2)]
    return cmpe_add(shares)


def cohen_binary_combine(testimonies: Sequence, mode: Mode | str | None = None) -> tuple[Probability, Probability]:
    """Combine testimonies stated for the disfavoured side of a binary question.

    Returns ``(favored, disfavored)``. The disfavoured side multiplies;
    the favoured side is the cMPE sum of the complements, whose error
    product is exactly the disfavoured product, so the pair sums to 1.
    """
    items, mode = coerce(testimonies, mode)
    if not items:
        raise ValueError("need at least one testimony")
    for t in items:
        if t > Fraction(1, 2):
            raise NotDisfavoredSide(
                f"testimony {t} > 0.5; pass the probabilities of the less likely side"
            )
    disfavored = product(items)
    return complement(disfavored), disfavored


def derivation_identity(a, b, mode: Mode | str | None = None) -> tuple:
    """Both sides of ``ab + (1-a)b + a(1-b) = 1 - (1-a)(1-b)`` as raw numbers."""
    items, mode = coerce([a, b], mode)
    x, y = _arith(items, mode)
    lhs = x * y + (1 - x) * y + x * (1 - y)
    rhs = 1 - (1 - x) * (1 - y)
    return lhs, rhs


def nonlinear_add_curve(delta, step, mode: Mode | str | None = None) -> list[tuple[Probability, Probability]]:
    """``(x, cmpe_add(x, delta))`` on the grid ``0, step, ..., 1``."""
    d = Probability.of(delta)
    if mode is not None:
        d = d.to(mode)
    mode = d.mode
    step_f = Fraction(step) if not isinstance(step, float) else Fraction(repr(step))
    if not 0 < step_f < 1:
        raise ValueError(f"step must lie in (0, 1), got {step!r}")
    n = round(1 / step_f)
    if abs(n * step_f - 1) > Fraction(1, 10**9):
        raise ValueError(f"step {step!r} does not divide [0, 1] into a whole grid")
    out = []
    for i in range(n + 1):
        x = Probability(Fraction(i, n), Mode.EXACT_RATIONAL).to(mode)
        out.append((x, cmpe_add([x, d])))
    return out
