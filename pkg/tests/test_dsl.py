import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ast_gen import depth, random_tree
from probcomb.core import Mode
from probcomb.dsl import (
    Call,
    CmpeAdd,
    Complement,
    Count,
    DpeSub,
    Product,
    TokenKind,
    evaluate,
    evaluate_source,
    literal,
    parse,
    parse_expression,
    to_source,
    tokenize,
)
from probcomb.errors import ChainOverflow, DSLError, EvaluationError, LexError, ParseError, SubtrahendExceedsMinuend

L = literal


class TestTokenize:
    def test_cmpe(self):
        assert [t.kind for t in tokenize("0.4 (+) 0.7")] == [TokenKind.NUMBER, TokenKind.CMPE, TokenKind.NUMBER]

    def test_tilde(self):
        assert [t.kind for t in tokenize("~0.25")] == [TokenKind.TILDE, TokenKind.NUMBER]

    def test_malformed_operator(self):
        with pytest.raises(LexError) as info:
            tokenize("0.4 (+ 0.7")
        assert info.value.span == (4, 6)

    @pytest.mark.parametrize("text, col", [("0.4 + 0.7", 4), ("0.5 - 0.1", 4), ("0.5-0.1", 3)])
    def test_plain_operators_rejected(self, text, col):
        with pytest.raises(LexError) as info:
            tokenize(text)
        assert info.value.span[0] == col

    def test_spans(self):
        toks = tokenize("  .5 * 1e-3")
        assert [t.span for t in toks] == [(2, 4), (5, 6), (7, 11)]

    def test_unexpected_character(self):
        with pytest.raises(LexError):
            tokenize("0.4 / 0.2")


class TestParse:
    def test_thunderstorm(self):
        assert parse_expression("0.6 (+) 0.4 (+) 0.5") == CmpeAdd((L("0.6"), L("0.4"), L("0.5")))

    def test_precedence(self):
        assert parse_expression("~0.3 * 0.8") == Product((Complement(L("0.3")), L("0.8")))

    def test_dpe(self):
        assert parse_expression("0.99999 (-) 0.999") == DpeSub(L("0.99999"), (L("0.999"),))

    def test_dpe_chain_folds(self):
        assert parse_expression("0.9 (-) 0.1 (-) 0.2") == DpeSub(L("0.9"), (L("0.1"), L("0.2")))

    def test_mixed_chain_left_assoc(self):
        want = DpeSub(CmpeAdd((L("0.1"), L("0.2"))), (L("0.3"),))
        assert parse_expression("0.1 (+) 0.2 (-) 0.3") == want

    def test_parens_keep_grouping(self):
        want = CmpeAdd((L("0.1"), CmpeAdd((L("0.2"), L("0.3")))))
        assert parse_expression("0.1 (+) (0.2 (+) 0.3)") == want

    def test_calls(self):
        node = parse_expression("laplace(50, 50) (+) bayes(0.5, 0.6, 0.8)")
        assert node.children[0] == Call("laplace", (Count(50), Count(50)))
        assert node.children[1].name == "bayes"

    def test_parse_from_tokens(self):
        assert parse(tokenize("0.5")) == L("0.5")

    @pytest.mark.parametrize(
        "text",
        [
            "",
            "0.4 (+)",
            "(0.4",
            "0.4)",
            "1.5",
            "foo(0.1)",
            "bayes(0.1, 0.2)",
            "laplace(0.5, 1)",
            "broad(0.5)",
            "0.4 0.5",
        ],
    )
    def test_errors(self, text):
        with pytest.raises(ParseError) as info:
            parse_expression(text)
        start, end = info.value.span
        assert 0 <= start <= end <= len(text)

    def test_end_of_input_span(self):
        with pytest.raises(ParseError) as info:
            parse_expression("0.4 (+) ")
        assert info.value.span == (8, 8)


class TestEvaluate:
    @pytest.mark.parametrize("mode", list(Mode))
    def test_thunderstorm(self, mode):
        assert float(evaluate_source("0.6 (+) 0.4 (+) 0.5", mode)) == pytest.approx(0.88, abs=1e-12)

    def test_complement_zero(self):
        assert evaluate_source("~0").value == 1.0

    def test_laplace_groups(self):
        assert evaluate_source("laplace(50, 50) (+) laplace(50, 50)", "rational").value == 1 - Fraction(1, 52**2)

    def test_bayes(self):
        assert evaluate_source("bayes(0.5, 0.6, 0.8)", "rational").value == Fraction(3, 7)

    def test_broad_valid(self):
        assert evaluate_source("broad(0.5, 0.9)").value == pytest.approx(5 / 9)

    def test_broad_overflow(self):
        with pytest.raises(EvaluationError) as info:
            evaluate_source("broad(0.5, 0.8, 0.8, 0.8, 0.8)")
        cause = info.value.cause
        assert isinstance(cause, ChainOverflow)
        assert cause.report.overflow_index == 4

    def test_error_carries_span(self):
        text = "0.9 * (0.1 (-) 0.5)"
        with pytest.raises(EvaluationError) as info:
            evaluate_source(text)
        assert info.value.span == (7, 18)
        assert isinstance(info.value.cause, SubtrahendExceedsMinuend)

    def test_count_alone_is_not_probability(self):
        with pytest.raises(EvaluationError):
            evaluate(Count(3))


class TestRoundTrip:
    @pytest.mark.parametrize(
        "text",
        [
            "0.4 (+) 0.7",
            "~(0.3 (+) 0.2) * 0.5",
            "(0.9 (-) 0.1) (-) 0.2",
            "0.1 (-) 0.05 (+) 0.2",
            "(0.1 (+) 0.2) (+) 0.3",
            "~~0.3",
            "broad(0.5, 0.9 * 0.9)",
        ],
    )
    def test_source_stable(self, text):
        node = parse_expression(text)
        assert parse_expression(to_source(node)) == node

    def test_literal_spelling(self):
        assert to_source(CmpeAdd((L("0.075"), L("1")))) == "0.075 (+) 1"
        node = parse_expression(to_source(CmpeAdd((L("0.075"), L("1")))))
        assert node.children[0].value.value == Fraction(3, 40)

    def test_random_trees(self):
        rng = random.Random(11)
        for _ in range(300):
            tree = random_tree(rng)
            assert depth(tree) <= 6
            assert parse_expression(to_source(tree)) == tree

    @given(st.text(alphabet="0123456789.e(+-)*~, abdly", max_size=30))
    def test_error_spans_inside_input(self, text):
        try:
            parse_expression(text)
        except DSLError as exc:
            start, end = exc.span
            assert 0 <= start <= end <= len(text)
