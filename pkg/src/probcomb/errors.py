"""Exception and warning types raised across the package."""

from __future__ import annotations


class ProbabilityError(Exception):
    """Base class for all errors raised by probcomb."""


class InvalidProbability(ProbabilityError, ValueError):
    """A value outside [0, 1] (or NaN) was offered as a probability."""


class SubtrahendExceedsMinuend(ProbabilityError, ValueError):
    """Non-linear subtraction would produce a negative probability."""


class DivisionByZeroComplement(ProbabilityError, ZeroDivisionError):
    """A subtrahend of 1 leaves a zero error probability in the divisor."""


class ZeroEvidenceProbability(ProbabilityError, ZeroDivisionError):
    """The total probability of the evidence is zero."""


class PartitionNotNormalized(ProbabilityError, ValueError):
    """Priors declared exhaustive do not sum to one."""


class ImplicationViolated(ProbabilityError, ValueError):
    """P(E) < P(H) although H is declared to imply E."""


class NotDisfavoredSide(ProbabilityError, ValueError):
    """A testimony above 0.5 was passed where the low side was required."""


class ZeroConsequence(ProbabilityError, ValueError):
    """A verified consequence carries probability zero."""


class SpaceTooLarge(ProbabilityError, ValueError):
    """Enumeration was requested over more events than allowed."""


class ZeroEvidenceColumn(ProbabilityError, ZeroDivisionError):
    """The evidence column of a joint table carries no mass."""


class DocumentError(ProbabilityError):
    """An evidence document is malformed or violates the schema."""


class ValidationFailure(ProbabilityError):
    """An evidence document parsed but cannot be combined."""


class ExtensionalEvidenceRejected(ValidationFailure):
    def __init__(self, item_id: str):
        self.item_id = item_id
        super().__init__(
            f"evidence {item_id!r} is extensional; only weight-bearing "
            "evidence may enter a cMPE combination"
        )


class SemanticOverlap(ValidationFailure):
    def __init__(self, violations):
        self.violations = tuple(violations)
        parts = [
            f"{v.first!r} and {v.second!r} share {sorted(v.shared)}"
            for v in self.violations
        ]
        super().__init__("semantic overlap: " + "; ".join(parts))


class DSLError(ProbabilityError):
    """Error tied to a span of the expression source."""

    def __init__(self, message: str, span: tuple[int, int]):
        self.message = message
        self.span = span
        super().__init__(f"{message} at {span[0]}..{span[1]}")


class LexError(DSLError):
    pass


class ParseError(DSLError):
    pass


class EvaluationError(DSLError):
    def __init__(self, message: str, span: tuple[int, int], cause: Exception | None = None):
        self.cause = cause
        super().__init__(message, span)


class ChainOverflow(ProbabilityError, ValueError):
    """A Broad chain exceeded 1 where a probability was required."""

    def __init__(self, report):
        self.report = report
        super().__init__(
            f"chain value {float(report.raw_value):.6g} exceeds 1 "
            f"(first at consequence {report.overflow_index})"
        )


class UnderflowWarning(RuntimeWarning):
    """Floating-point arithmetic lost a tail probability."""
