import json
from fractions import Fraction

import pytest

from probcomb.combinators import SupportContribution
from probcomb.core import Mode, Probability
from probcomb.errors import DocumentError, ExtensionalEvidenceRejected, SemanticOverlap
from probcomb.evidence import (
    Evidence,
    EvidenceDocument,
    EvidenceKind,
    combine_document,
    document_to_dict,
    laplace_vs_cmpe,
    loads_document,
    validate_semantic_independence,
)

THUNDER = {
    "hypothesis": "thunderstorm",
    "prior": 0.6,
    "evidence": [
        {"id": "temperature", "p": 0.4, "kind": "weight", "tags": ["temperature"]},
        {"id": "humidity", "p": 0.5, "kind": "weight", "tags": ["humidity"]},
    ],
}


def ev(id, p, *tags, kind=EvidenceKind.WEIGHT_BEARING):
    return Evidence(id, p, kind, frozenset(tags))


class TestIndependence:
    def test_sensory_channels(self):
        items = [ev("a", 0.9, "visual"), ev("b", 0.9, "tactile"), ev("c", 0.9, "olfactory")]
        assert validate_semantic_independence(items).ok

    def test_overlap_named(self):
        res = validate_semantic_independence([ev("a", 0.9, "visual"), ev("b", 0.9, "visual", "tactile")])
        assert not res.ok
        (v,) = res.violations
        assert (v.first, v.second, v.shared) == ("a", "b", frozenset({"visual"}))

    def test_single(self):
        assert validate_semantic_independence([ev("a", 0.5, "x")])

    def test_extensional_items_ignored(self):
        items = [ev("a", 0.5, "x"), ev("b", 0.5, "x", kind=EvidenceKind.EXTENSIONAL)]
        assert validate_semantic_independence(items).ok


class TestEvidenceTypes:
    def test_weight_bearing_needs_tags(self):
        with pytest.raises(DocumentError):
            Evidence("a", 0.5)

    def test_duplicate_ids(self):
        with pytest.raises(DocumentError):
            EvidenceDocument("h", 0.5, (ev("a", 0.1, "x"), ev("a", 0.2, "y")))


class TestCombine:
    def test_thunderstorm(self):
        doc = loads_document(json.dumps(THUNDER), Mode.EXACT_RATIONAL)
        res = combine_document(doc)
        assert res.probability.value == Fraction(88, 100)
        assert res.trail[-1].operator == "cmpe_add"
        assert res.trail[-1].operands == ("prior", "temperature", "humidity")

    def test_descartes(self):
        doc = EvidenceDocument("h", 0.4, (ev("enteritis", 0.5, "enteritis"),))
        assert combine_document(doc).probability.value == pytest.approx(0.7)

    def test_empty_keeps_prior(self):
        assert combine_document(EvidenceDocument("h", 0.37)).probability.value == 0.37

    def test_empty_without_prior(self):
        assert combine_document(EvidenceDocument("h")).probability.value == 0

    def test_extensional_rejected(self):
        doc = EvidenceDocument("h", 0.4, (ev("space", 0.9, kind=EvidenceKind.EXTENSIONAL),))
        with pytest.raises(ExtensionalEvidenceRejected) as info:
            combine_document(doc)
        assert info.value.item_id == "space"

    def test_overlap_rejected(self):
        doc = EvidenceDocument("h", 0.4, (ev("a", 0.5, "visual"), ev("b", 0.5, "visual")))
        with pytest.raises(SemanticOverlap) as info:
            combine_document(doc)
        assert "visual" in str(info.value)

    def test_carrier_contribution(self):
        items = (
            Evidence("a", 0.5, tags=frozenset({"x"}), conditional_on_carrier=SupportContribution(0.6, 0.5)),
            Evidence("b", 0.4, tags=frozenset({"y"}), conditional_on_carrier=SupportContribution(0.8, 0.4)),
        )
        res = combine_document(EvidenceDocument("c", None, items))
        assert res.probability.value == pytest.approx(0.524)
        assert [s.operator for s in res.trail] == ["support_transfer", "support_transfer", "cmpe_add"]

    def test_mode_override(self):
        doc = loads_document(json.dumps(THUNDER))
        res = combine_document(doc, Mode.LOG_COMPLEMENT)
        assert res.probability.mode is Mode.LOG_COMPLEMENT
        assert res.probability.value == pytest.approx(0.88, abs=1e-12)

    def test_to_dict(self):
        d = combine_document(loads_document(json.dumps(THUNDER))).to_dict()
        assert d["probability"] == pytest.approx(0.88)
        assert d["mode"] == "float"


class TestDocumentIO:
    def test_round_trip(self):
        doc = loads_document(json.dumps(THUNDER))
        assert document_to_dict(doc) == THUNDER

    def test_decimals_exact_in_rational_mode(self):
        doc = loads_document('{"hypothesis": "h", "prior": 0.1, "evidence": []}', "rational")
        assert doc.prior.value == Fraction(1, 10)

    @pytest.mark.parametrize(
        "text",
        [
            "not json",
            '{"hypothesis": "h"}',
            '{"hypothesis": "h", "evidence": [], "extra": 1}',
            '{"hypothesis": "h", "evidence": [{"id": "a", "p": 1.5, "kind": "weight", "tags": ["x"]}]}',
            '{"hypothesis": "h", "evidence": [{"id": "a", "p": 0.5, "kind": "other", "tags": ["x"]}]}',
            '{"hypothesis": "h", "evidence": [{"id": "a", "p": 0.5, "kind": "weight", "tags": []}]}',
        ],
    )
    def test_malformed(self, text):
        with pytest.raises(DocumentError):
            loads_document(text)


class TestLaplaceComparison:
    @pytest.mark.parametrize(
        "n, want",
        [
            (50, (0.9808, 0.9902, 0.99963, 0.9623)),
            (100, (0.9902, 0.99505, 0.99990, 0.9806)),
            (5, (0.8571, 0.9167, 0.9796, 0.7551)),
        ],
    )
    def test_rows(self, n, want):
        (row,) = laplace_vs_cmpe([n])
        for got, w in zip(row.as_tuple(), want):
            assert float(got) == pytest.approx(w, abs=5e-5)

    def test_exact_row_5(self):
        (row,) = laplace_vs_cmpe([5], mode=Mode.EXACT_RATIONAL)
        assert row.dpe_margin.value == Fraction(37, 49)

    def test_three_groups(self):
        (row,) = laplace_vs_cmpe([10], groups=3, mode=Mode.EXACT_RATIONAL)
        assert row.laplace_pooled.value == Fraction(31, 32)
        assert row.cmpe_groups.value == 1 - Fraction(1, 12) ** 3

    def test_bad_args(self):
        with pytest.raises(ValueError):
            laplace_vs_cmpe([])
        with pytest.raises(ValueError):
            laplace_vs_cmpe([5], groups=1)
