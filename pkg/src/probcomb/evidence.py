"""Evidence documents: semantic tags, evidence kinds, validation, combination.

A document names a hypothesis, an optional prior and a list of evidence
items.  Weight-bearing items on pairwise disjoint semantic channels are
combined by non-linear addition; an item supported through a carrier
contributes ``carrier_prior * transfer``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import Decimal
from enum import Enum
from itertools import combinations
from pathlib import Path
from typing import Sequence

import jsonschema

from .combinators import SupportContribution, cmpe_add, dpe_sub, laplace_succession, product
from .core import Mode, Probability
from .errors import DocumentError, ExtensionalEvidenceRejected, SemanticOverlap


class EvidenceKind(str, Enum):
    WEIGHT_BEARING = "weight"
    EXTENSIONAL = "extensional"


@dataclass(frozen=True)
class Evidence:
    id: str
    probability: Probability
    kind: EvidenceKind = EvidenceKind.WEIGHT_BEARING
    tags: frozenset[str] = frozenset()
    conditional_on_carrier: SupportContribution | None = None

    def __post_init__(self):
        if not self.id:
            raise DocumentError("evidence id must be non-empty")
        object.__setattr__(self, "probability", Probability.of(self.probability))
        object.__setattr__(self, "kind", EvidenceKind(self.kind))
        tags = frozenset(self.tags)
        if any(not isinstance(t, str) or not t for t in tags):
            raise DocumentError(f"evidence {self.id!r}: tags must be non-empty strings")
        if self.kind is EvidenceKind.WEIGHT_BEARING and not tags:
            raise DocumentError(
                f"evidence {self.id!r}: weight-bearing evidence must declare its semantic channel"
            )
        object.__setattr__(self, "tags", tags)


@dataclass(frozen=True)
class EvidenceDocument:
    hypothesis_id: str
    prior: Probability | None = None
    items: tuple[Evidence, ...] = ()

    def __post_init__(self):
        if self.prior is not None:
            object.__setattr__(self, "prior", Probability.of(self.prior))
        items = tuple(self.items)
        seen = set()
        for e in items:
            if e.id in seen:
                raise DocumentError(f"duplicate evidence id {e.id!r}")
            seen.add(e.id)
        object.__setattr__(self, "items", items)


@dataclass(frozen=True)
class OverlapViolation:
    first: str
    second: str
    shared: frozenset[str]


@dataclass(frozen=True)
class IndependenceResult:
    violations: tuple[OverlapViolation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class AuditStep:
    operator: str
    operands: tuple[str, ...]
    result: Probability
    note: str = ""


@dataclass(frozen=True)
class CombinationResult:
    probability: Probability
    trail: tuple[AuditStep, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "probability": float(self.probability),
            "mode": self.probability.mode.value,
            "trail": [
                {
                    "operator": s.operator,
                    "operands": list(s.operands),
                    "result": float(s.result),
                    **({"note": s.note} if s.note else {}),
                }
                for s in self.trail
            ],
        }


def validate_semantic_independence(items: Sequence[Evidence]) -> IndependenceResult:
    """Weight-bearing items must sit on pairwise disjoint tag sets."""
    weight = [e for e in items if e.kind is EvidenceKind.WEIGHT_BEARING]
    violations = [
        OverlapViolation(a.id, b.id, a.tags & b.tags)
        for a, b in combinations(weight, 2)
        if a.tags & b.tags
    ]
    return IndependenceResult(tuple(violations))


def combine_document(doc: EvidenceDocument, mode: Mode | str | None = None) -> CombinationResult:
    """cMPE combination of the prior with every item of the document.

    Raises :class:`ExtensionalEvidenceRejected` for the first extensional
    item and :class:`SemanticOverlap` if channels overlap.
    """
    for e in doc.items:
        if e.kind is EvidenceKind.EXTENSIONAL:
            raise ExtensionalEvidenceRejected(e.id)
    check = validate_semantic_independence(doc.items)
    if not check.ok:
        raise SemanticOverlap(check.violations)

    if mode is None:
        mode = doc.prior.mode if doc.prior is not None else Mode.FLOATING
    mode = Mode(mode)
    trail = []
    operands: list[Probability] = []
    labels: list[str] = []
    if doc.prior is not None:
        p = doc.prior.to(mode)
        operands.append(p)
        labels.append("prior")
        trail.append(AuditStep("operand", ("prior",), p))
    for e in doc.items:
        if e.conditional_on_carrier is None:
            p = e.probability.to(mode)
            trail.append(AuditStep("operand", (e.id,), p))
        else:
            c = e.conditional_on_carrier
            p = product([c.carrier_prior, c.transfer], mode)
            trail.append(
                AuditStep(
                    "support_transfer",
                    (f"{e.id}.carrier", f"{e.id}.transfer"),
                    p,
                    f"{c.carrier_prior} x {c.transfer}",
                )
            )
        operands.append(p)
        labels.append(e.id)

    if not operands:
        result = Probability(0, mode)
        trail.append(AuditStep("empty", (), result, "no operands; cMPE identity"))
    elif len(operands) == 1:
        result = operands[0]
    else:
        result = cmpe_add(operands, mode)
        trail.append(AuditStep("cmpe_add", tuple(labels), result))
    return CombinationResult(result, tuple(trail))


# ----------------------------------------------------------------- JSON I/O

DOCUMENT_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["hypothesis", "evidence"],
    "properties": {
        "hypothesis": {"type": "string"},
        "prior": {"type": "number", "minimum": 0, "maximum": 1},
        "evidence": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["id", "p", "kind", "tags"],
                "properties": {
                    "id": {"type": "string", "minLength": 1},
                    "p": {"type": "number", "minimum": 0, "maximum": 1},
                    "kind": {"enum": ["weight", "extensional"]},
                    "tags": {"type": "array", "items": {"type": "string", "minLength": 1}},
                    "carrier": {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["prior", "transfer"],
                        "properties": {
                            "prior": {"type": "number", "minimum": 0, "maximum": 1},
                            "transfer": {"type": "number", "minimum": 0, "maximum": 1},
                        },
                    },
                },
            },
        },
    },
}


def _num(x, mode: Mode) -> Probability:
    # decimals are kept exact until the requested mode is known
    return Probability(x, Mode.EXACT_RATIONAL).to(mode)


def parse_document(data: dict, mode: Mode | str = Mode.FLOATING) -> EvidenceDocument:
    mode = Mode(mode)
    try:
        jsonschema.validate(data, DOCUMENT_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise DocumentError(f"{where}: {exc.message}") from None
    items = []
    for raw in data["evidence"]:
        carrier = None
        if "carrier" in raw:
            carrier = SupportContribution(
                _num(raw["carrier"]["prior"], mode), _num(raw["carrier"]["transfer"], mode)
            )
        items.append(
            Evidence(
                id=raw["id"],
                probability=_num(raw["p"], mode),
                kind=EvidenceKind(raw["kind"]),
                tags=frozenset(raw["tags"]),
                conditional_on_carrier=carrier,
            )
        )
    prior = _num(data["prior"], mode) if "prior" in data else None
    return EvidenceDocument(data["hypothesis"], prior, tuple(items))


def loads_document(text: str, mode: Mode | str = Mode.FLOATING) -> EvidenceDocument:
    try:
        data = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from None
    return parse_document(data, mode)


def load_document(path: str | Path, mode: Mode | str = Mode.FLOATING) -> EvidenceDocument:
    """Read a UTF-8 JSON evidence document. ``OSError`` propagates."""
    return loads_document(Path(path).read_text(encoding="utf-8"), mode)


def document_to_dict(doc: EvidenceDocument) -> dict:
    out: dict = {"hypothesis": doc.hypothesis_id}
    if doc.prior is not None:
        out["prior"] = float(doc.prior)
    out["evidence"] = []
    for e in doc.items:
        item = {
            "id": e.id,
            "p": float(e.probability),
            "kind": e.kind.value,
            "tags": sorted(e.tags),
        }
        if e.conditional_on_carrier is not None:
            c = e.conditional_on_carrier
            item["carrier"] = {"prior": float(c.carrier_prior), "transfer": float(c.transfer)}
        out["evidence"].append(item)
    return out


# ------------------------------------------------------- Laplace comparison

@dataclass(frozen=True)
class LaplaceComparison:
    n: int
    laplace_n: Probability
    laplace_pooled: Probability
    cmpe_groups: Probability
    dpe_margin: Probability
    groups: int = 2

    def as_tuple(self) -> tuple[Probability, ...]:
        return (self.laplace_n, self.laplace_pooled, self.cmpe_groups, self.dpe_margin)


def laplace_vs_cmpe(
    group_sizes: Sequence[int], groups: int = 2, mode: Mode | str = Mode.FLOATING
) -> list[LaplaceComparison]:
    """Compare one homogeneous collective against ``groups`` diverse ones.

    For each size n: Laplace on n uniform successes; Laplace on
    ``groups * n`` pooled successes; the cMPE sum of ``groups`` separate
    Laplace(n) values; and the DPE margin of the latter over the pooled
    estimate.
    """
    if not group_sizes:
        raise ValueError("group_sizes must be non-empty")
    if groups < 2:
        raise ValueError("need at least two groups to compare against pooling")
    mode = Mode(mode)
    rows = []
    for n in group_sizes:
        single = laplace_succession(n, n, mode)
        pooled = laplace_succession(groups * n, groups * n, mode)
        diverse = cmpe_add([single] * groups)
        margin = dpe_sub(diverse, [pooled])
        rows.append(LaplaceComparison(n, single, pooled, diverse, margin, groups))
    return rows
