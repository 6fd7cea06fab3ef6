"""Probability values, their three representations, and primitive arithmetic.

A :class:`Probability` carries its value in one of three modes:

* ``Mode.FLOATING``: an IEEE double.
* ``Mode.LOG_COMPLEMENT``: the natural log of the error probability,
  ``ln(1 - p)``.  Keeps precision at both tails, e.g. an error of 1e-45
  or a confidence of 1 - 1e-45.
* ``Mode.EXACT_RATIONAL``: a :class:`fractions.Fraction` in lowest terms.

All values are immutable. Out-of-range input is rejected, never clamped.
"""

from __future__ import annotations

import math
import sys
import warnings
from dataclasses import dataclass, field
from decimal import Decimal
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import InvalidProbability, UnderflowWarning

DEFAULT_TOLERANCE = 1e-9

# below this an input is treated as a tail value and routed through log space
TAIL_THRESHOLD = 1e-6

Real = Union[int, float, Fraction, Decimal, str]


class Mode(str, Enum):
    FLOATING = "float"
    LOG_COMPLEMENT = "log"
    EXACT_RATIONAL = "rational"


RepresentationMode = Mode


def _to_fraction(x) -> Fraction:
    if isinstance(x, bool):
        raise InvalidProbability(f"not a probability: {x!r}")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise InvalidProbability(f"not a probability: {x!r}")
        # shortest round-tripping decimal, so 0.1 becomes 1/10
        return Fraction(repr(x))
    if isinstance(x, Decimal):
        if not x.is_finite():
            raise InvalidProbability(f"not a probability: {x!r}")
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise InvalidProbability(f"not a probability: {x!r}") from None
    raise InvalidProbability(f"not a probability: {x!r}")


def _to_float(x) -> float:
    if isinstance(x, bool):
        raise InvalidProbability(f"not a probability: {x!r}")
    if isinstance(x, (int, float, Fraction, Decimal)):
        return float(x)
    if isinstance(x, str):
        try:
            return float(x.strip())
        except ValueError:
            pass
        return float(_to_fraction(x))
    raise InvalidProbability(f"not a probability: {x!r}")


def _check_range(v, raw) -> None:
    if v != v or v < 0 or v > 1:
        raise InvalidProbability(f"probability out of range [0, 1]: {raw!r}")


def _log1m_exact(f: Fraction) -> float:
    """ln(1 - f) for an exact f in [0, 1]."""
    if f == 1:
        return -math.inf
    if f == 0:
        return 0.0
    if f < Fraction(1, 2):
        return math.log1p(-float(f))
    c = 1 - f
    fc = float(c)
    if fc > 0.0:
        return math.log(fc)
    # complement below the float range; logs of big ints are still fine
    return math.log(c.numerator) - math.log(c.denominator)


def _log_of_value(lc: float) -> float:
    """ln(p) given ln(1 - p)."""
    if lc == 0.0:
        return -math.inf
    return math.log(-math.expm1(lc))


@dataclass(frozen=True)
class Probability:
    """A probability in [0, 1] in one of three representations.

    ``value`` is a float (floating and log-complement modes) or a
    Fraction (exact mode). In log-complement mode ``log_complement`` is
    the authoritative field and ``value`` is derived from it.
    """

    value: float | Fraction
    mode: Mode = Mode.FLOATING
    log_complement: float | None = field(default=None, repr=False)

    def __post_init__(self):
        mode = Mode(self.mode)
        object.__setattr__(self, "mode", mode)
        raw = self.value
        if mode is Mode.FLOATING:
            v = _to_float(raw)
            _check_range(v, raw)
            object.__setattr__(self, "value", v)
            object.__setattr__(self, "log_complement", None)
        elif mode is Mode.EXACT_RATIONAL:
            v = _to_fraction(raw)
            _check_range(v, raw)
            object.__setattr__(self, "value", v)
            object.__setattr__(self, "log_complement", None)
        else:
            lc = self.log_complement
            if lc is None:
                if isinstance(raw, float):
                    _check_range(raw, raw)
                    lc = -math.inf if raw == 1.0 else math.log1p(-raw)
                    v = raw
                else:
                    f = _to_fraction(raw)
                    _check_range(f, raw)
                    lc = _log1m_exact(f)
                    v = float(f)
            else:
                lc = float(lc)
                if lc != lc or lc > 0:
                    raise InvalidProbability(f"log complement must be <= 0: {lc!r}")
                v = -math.expm1(lc)
            if lc == 0.0:
                lc = 0.0  # normalise -0.0
            object.__setattr__(self, "value", v)
            object.__setattr__(self, "log_complement", lc)

    @classmethod
    def of(cls, x, mode: Mode | str | None = None) -> "Probability":
        """Build from a number, numeric string, or another Probability."""
        if isinstance(x, Probability):
            return x if mode is None else x.to(mode)
        return cls(x, Mode(mode) if mode is not None else Mode.FLOATING)

    def to(self, mode: Mode | str) -> "Probability":
        mode = Mode(mode)
        if mode is self.mode:
            return self
        if mode is Mode.FLOATING:
            return Probability(float(self.value), mode)
        if mode is Mode.LOG_COMPLEMENT:
            if self.mode is Mode.EXACT_RATIONAL:
                return Probability(self.value, mode, _log1m_exact(self.value))
            return Probability(self.value, mode)
        # to exact
        if self.mode is Mode.LOG_COMPLEMENT and self.value > 0.5:
            return Probability(1 - _to_fraction(math.exp(self.log_complement)), mode)
        return Probability(_to_fraction(self.value), mode)

    @property
    def error(self) -> float | Fraction:
        """1 - p, computed without cancellation in log-complement mode."""
        if self.mode is Mode.LOG_COMPLEMENT:
            return math.exp(self.log_complement)
        return 1 - self.value

    def is_zero(self) -> bool:
        if self.mode is Mode.LOG_COMPLEMENT:
            return self.log_complement == 0.0
        return self.value == 0

    def is_one(self) -> bool:
        if self.mode is Mode.LOG_COMPLEMENT:
            return self.log_complement == -math.inf
        return self.value == 1

    def approx_eq(self, other, tol: float = DEFAULT_TOLERANCE) -> bool:
        return abs(float(self) - float(other)) <= tol

    def __float__(self) -> float:
        return float(self.value)

    def _cmp_pair(self, other):
        if isinstance(other, Probability):
            if self.mode is other.mode is Mode.LOG_COMPLEMENT:
                # larger p has the more negative log complement
                return -self.log_complement, -other.log_complement
            if self.mode is other.mode is Mode.EXACT_RATIONAL:
                return self.value, other.value
            return float(self), float(other)
        if isinstance(other, (int, float, Fraction)):
            if self.mode is Mode.EXACT_RATIONAL:
                return self.value, other
            return float(self), other
        return NotImplemented

    def __lt__(self, other):
        pair = self._cmp_pair(other)
        return pair if pair is NotImplemented else pair[0] < pair[1]

    def __le__(self, other):
        pair = self._cmp_pair(other)
        return pair if pair is NotImplemented else pair[0] <= pair[1]

    def __gt__(self, other):
        pair = self._cmp_pair(other)
        return pair if pair is NotImplemented else pair[0] > pair[1]

    def __ge__(self, other):
        pair = self._cmp_pair(other)
        return pair if pair is NotImplemented else pair[0] >= pair[1]

    def __str__(self) -> str:
        if self.mode is Mode.EXACT_RATIONAL:
            return str(self.value)
        return repr(float(self.value))


@dataclass(frozen=True)
class ErrorComplement:
    """``ln(1 - p)``: 0 stands for p = 0 and -inf for p = 1."""

    log_complement: float

    def __post_init__(self):
        lc = float(self.log_complement)
        if lc != lc or lc > 0:
            raise InvalidProbability(f"log complement must be <= 0: {lc!r}")
        object.__setattr__(self, "log_complement", 0.0 if lc == 0 else lc)

    @property
    def error(self) -> float:
        return math.exp(self.log_complement)


def coerce(ps: Iterable, mode: Mode | str | None = None) -> tuple[list[Probability], Mode]:
    """Convert operands to a common mode (the first operand's, by default)."""
    items = [Probability.of(p) if not isinstance(p, Probability) else p for p in ps]
    if mode is None:
        mode = items[0].mode if items else Mode.FLOATING
    mode = Mode(mode)
    return [p.to(mode) for p in items], mode


def _warn_underflow(what: str) -> None:
    warnings.warn(f"floating-point underflow: {what}", UnderflowWarning, stacklevel=3)


def complement(p: Probability) -> Probability:
    """1 - p, in the same representation."""
    if p.mode is Mode.LOG_COMPLEMENT:
        return Probability(0.0, p.mode, _log_of_value(p.log_complement))
    return Probability(1 - p.value, p.mode)


def product(ps: Sequence, mode: Mode | str | None = None) -> Probability:
    """Product of probabilities (independent conjunction)."""
    items, mode = coerce(ps, mode)
    if not items:
        raise ValueError("product of an empty list")
    if mode is Mode.EXACT_RATIONAL:
        return Probability(math.prod(p.value for p in items), mode)
    if any(p.is_zero() for p in items):
        return Probability(0.0, mode)
    if mode is Mode.FLOATING:
        r = math.prod(p.value for p in items)
        if r < sys.float_info.min:
            _warn_underflow(f"product of {len(items)} nonzero factors is {r!r}")
        return Probability(r, mode)
    log_p = math.fsum(_log_of_value(p.log_complement) for p in items)
    r = math.exp(log_p)
    if r < sys.float_info.min:
        _warn_underflow(f"product exp({log_p:.6g}) is below the double range")
    return Probability(0.0, mode, -math.inf if r == 1.0 else math.log1p(-r))


def log_space_product(ps: Sequence, mode: Mode | str | None = None) -> Probability:
    """Product computed as a sum of logarithms; used for tail inputs."""
    items, mode = coerce(ps, mode)
    if mode is not Mode.FLOATING:
        return product(items, mode)
    if any(p.is_zero() for p in items):
        return Probability(0.0, mode)
    log_p = math.fsum(math.log(p.value) for p in items)
    r = math.exp(log_p)
    if r < sys.float_info.min:
        _warn_underflow(f"product 10^{log_p / math.log(10):.4g} is below the double range")
    return Probability(r, mode)


def to_log_complement(p: Probability) -> ErrorComplement:
    if p.mode is Mode.LOG_COMPLEMENT:
        return ErrorComplement(p.log_complement)
    if p.mode is Mode.EXACT_RATIONAL:
        return ErrorComplement(_log1m_exact(p.value))
    if p.value == 1.0:
        return ErrorComplement(-math.inf)
    return ErrorComplement(math.log1p(-p.value))


def from_log_complement(e: ErrorComplement | float) -> Probability:
    lc = e.log_complement if isinstance(e, ErrorComplement) else float(e)
    return Probability(0.0, Mode.LOG_COMPLEMENT, lc)
