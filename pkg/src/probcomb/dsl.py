"""A small expression language for probability combination.

Grammar::

    expr   := term (("(+)" | "(-)") term)*
    term   := factor ("*" factor)*
    factor := "~" factor | number | ident "(" expr ("," expr)* ")" | "(" expr ")"

``(+)`` is non-linear addition, ``(-)`` non-linear subtraction, ``*`` the
plain product and ``~`` the complement.  Plain ``+`` and ``-`` are lexical
errors on purpose: adding probabilities linearly is the mistake the
language exists to prevent.

Chains of ``(+)`` fold into a single n-ary node and ``a (-) b (-) c``
folds into one subtraction with two subtrahends. Mixed chains associate
to the left.  Built-in calls: ``bayes(prior, likelihood, alt_likelihood)``,
``laplace(successes, trials)`` and ``broad(prior, c1, ..., cn)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Union

from . import combinators as comb
from .core import Mode, Probability, complement, product
from .diagnostics import broad_chain
from .errors import ChainOverflow, EvaluationError, LexError, ParseError, ProbabilityError

Span = tuple[int, int]


class TokenKind(Enum):
    NUMBER = "number"
    CMPE = "(+)"
    DPE = "(-)"
    STAR = "*"
    TILDE = "~"
    LPAREN = "("
    RPAREN = ")"
    COMMA = ","
    IDENT = "identifier"
    END = "end of input"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    span: Span


_NUMBER = re.compile(r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_SINGLE = {
    "*": TokenKind.STAR,
    "~": TokenKind.TILDE,
    "(": TokenKind.LPAREN,
    ")": TokenKind.RPAREN,
    ",": TokenKind.COMMA,
}


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into tokens (spans are character offsets).

    The returned list does not include an end-of-input token.
    """
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        three = text[i:i + 3]
        if three == "(+)":
            tokens.append(Token(TokenKind.CMPE, three, (i, i + 3)))
            i += 3
            continue
        if three == "(-)":
            tokens.append(Token(TokenKind.DPE, three, (i, i + 3)))
            i += 3
            continue
        if text[i:i + 2] in ("(+", "(-"):
            raise LexError(f"malformed operator {text[i:i + 2]!r}; expected '(+)' or '(-)'", (i, i + 2))
        if ch in _SINGLE:
            tokens.append(Token(_SINGLE[ch], ch, (i, i + 1)))
            i += 1
            continue
        m = _NUMBER.match(text, i)
        if m:
            tokens.append(Token(TokenKind.NUMBER, m.group(), m.span()))
            i = m.end()
            continue
        m = _IDENT.match(text, i)
        if m:
            tokens.append(Token(TokenKind.IDENT, m.group(), m.span()))
            i = m.end()
            continue
        if ch in "+-":
            op = "(+)" if ch == "+" else "(-)"
            raise LexError(
                f"plain {ch!r} is not a probability operator; use {op!r} for the non-linear form",
                (i, i + 1),
            )
        raise LexError(f"unexpected character {ch!r}", (i, i + 1))
    return tokens


# --------------------------------------------------------------------- AST

@dataclass(frozen=True)
class Literal:
    value: Probability
    text: str = field(default="", compare=False)
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Count:
    value: int
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Complement:
    child: "Node"
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Product:
    children: tuple["Node", ...]
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class CmpeAdd:
    children: tuple["Node", ...]
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class DpeSub:
    minuend: "Node"
    subtrahends: tuple["Node", ...]
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple["Node", ...]
    span: Span = field(default=(0, 0), compare=False)


Node = Union[Literal, Count, Complement, Product, CmpeAdd, DpeSub, Call]

# name -> (min args, max args or None)
FUNCTIONS = {"bayes": (3, 3), "laplace": (2, 2), "broad": (2, None)}


def literal(text: str) -> Literal:
    """Build a literal node from decimal text, exactly."""
    return Literal(Probability(Fraction(text), Mode.EXACT_RATIONAL), text)


# ------------------------------------------------------------------ parser

class _Parser:
    def __init__(self, tokens: list[Token], length: int):
        self.tokens = tokens
        self.pos = 0
        self.end = Token(TokenKind.END, "", (length, length))

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else self.end

    def advance(self) -> Token:
        t = self.tok
        self.pos += 1
        return t

    def expect(self, kind: TokenKind, what: str | None = None) -> Token:
        t = self.tok
        if t.kind is not kind:
            found = t.lexeme or t.kind.value
            raise ParseError(f"expected {what or kind.value!r}, found {found!r}", t.span)
        return self.advance()

    def expr(self) -> Node:
        node = self.term()
        start = node.span[0]
        chain = None  # which n-ary node this loop is currently extending
        while self.tok.kind in (TokenKind.CMPE, TokenKind.DPE):
            op = self.advance().kind
            right = self.term()
            span = (start, right.span[1])
            if op is TokenKind.CMPE:
                if chain is TokenKind.CMPE:
                    node = CmpeAdd(node.children + (right,), span)
                else:
                    node = CmpeAdd((node, right), span)
            else:
                if chain is TokenKind.DPE:
                    node = DpeSub(node.minuend, node.subtrahends + (right,), span)
                else:
                    node = DpeSub(node, (right,), span)
            chain = op
        return node

    def term(self) -> Node:
        node = self.factor()
        if self.tok.kind is not TokenKind.STAR:
            return node
        children = [node]
        while self.tok.kind is TokenKind.STAR:
            self.advance()
            children.append(self.factor())
        return Product(tuple(children), (node.span[0], children[-1].span[1]))

    def factor(self) -> Node:
        t = self.tok
        if t.kind is TokenKind.TILDE:
            self.advance()
            child = self.factor()
            return Complement(child, (t.span[0], child.span[1]))
        if t.kind is TokenKind.NUMBER:
            self.advance()
            value = Fraction(t.lexeme)
            if value > 1:
                raise ParseError(f"probability literal {t.lexeme} exceeds 1", t.span)
            return Literal(Probability(value, Mode.EXACT_RATIONAL), t.lexeme, t.span)
        if t.kind is TokenKind.IDENT:
            return self.call()
        if t.kind is TokenKind.LPAREN:
            self.advance()
            inner = self.expr()
            self.expect(TokenKind.RPAREN)
            return inner
        found = t.lexeme or t.kind.value
        raise ParseError(f"expected a number, '~', a call or '(', found {found!r}", t.span)

    def count(self) -> Count:
        t = self.expect(TokenKind.NUMBER, "non-negative integer")
        if not t.lexeme.isdigit():
            raise ParseError(f"expected a non-negative integer count, found {t.lexeme!r}", t.span)
        return Count(int(t.lexeme), t.span)

    def call(self) -> Call:
        name_tok = self.advance()
        name = name_tok.lexeme
        if name not in FUNCTIONS:
            raise ParseError(
                f"unknown function {name!r}; expected one of {', '.join(sorted(FUNCTIONS))}",
                name_tok.span,
            )
        self.expect(TokenKind.LPAREN)
        arg = self.count if name == "laplace" else self.expr
        args = [arg()]
        while self.tok.kind is TokenKind.COMMA:
            self.advance()
            args.append(arg())
        close = self.expect(TokenKind.RPAREN, "',' or ')'")
        span = (name_tok.span[0], close.span[1])
        lo, hi = FUNCTIONS[name]
        if len(args) < lo or (hi is not None and len(args) > hi):
            want = str(lo) if lo == hi else f"at least {lo}"
            raise ParseError(f"{name}() takes {want} arguments, got {len(args)}", span)
        return Call(name, tuple(args), span)


def parse(tokens: list[Token], length: int | None = None) -> Node:
    """Parse a token list into an expression tree.

    ``length`` is the source length, used for the end-of-input span.
    """
    if length is None:
        length = tokens[-1].span[1] if tokens else 0
    p = _Parser(tokens, length)
    node = p.expr()
    if p.tok.kind is not TokenKind.END:
        t = p.tok
        raise ParseError(f"unexpected {t.lexeme!r} after complete expression", t.span)
    return node


def parse_expression(text: str) -> Node:
    return parse(tokenize(text), len(text))


# ---------------------------------------------------------- pretty-printer

def _format_literal(node: Literal) -> str:
    if node.text:
        return node.text
    v = node.value.value
    if not isinstance(v, Fraction):
        return repr(float(v))
    d, twos, fives = v.denominator, 0, 0
    while d % 2 == 0:
        d, twos = d // 2, twos + 1
    while d % 5 == 0:
        d, fives = d // 5, fives + 1
    if d != 1:
        return repr(float(v))  # no finite decimal; not round-trip exact
    k = max(twos, fives)
    scaled = v.numerator * 10**k // v.denominator
    return f"{scaled}e-{k}" if k else str(scaled)


def to_source(node: Node) -> str:
    """Render a tree so that parsing the result gives the same tree back."""
    if isinstance(node, Literal):
        return _format_literal(node)
    if isinstance(node, Count):
        return str(node.value)
    if isinstance(node, Complement):
        inner = to_source(node.child)
        if isinstance(node.child, (Product, CmpeAdd, DpeSub)):
            inner = f"({inner})"
        return "~" + inner
    if isinstance(node, Product):
        parts = []
        for c in node.children:
            s = to_source(c)
            parts.append(f"({s})" if isinstance(c, (Product, CmpeAdd, DpeSub)) else s)
        return " * ".join(parts)
    if isinstance(node, CmpeAdd):
        first, rest = node.children[0], node.children[1:]
        # a leading sum would be absorbed into this chain; a leading difference is fine
        parts = [f"({to_source(first)})" if isinstance(first, CmpeAdd) else to_source(first)]
        parts += [_term(c) for c in rest]
        return " (+) ".join(parts)
    if isinstance(node, DpeSub):
        m = node.minuend
        head = f"({to_source(m)})" if isinstance(m, DpeSub) else to_source(m)
        return " (-) ".join([head] + [_term(c) for c in node.subtrahends])
    if isinstance(node, Call):
        return f"{node.name}({', '.join(to_source(a) for a in node.args)})"
    raise TypeError(f"not an expression node: {node!r}")


def _term(node: Node) -> str:
    s = to_source(node)
    return f"({s})" if isinstance(node, (CmpeAdd, DpeSub)) else s


# --------------------------------------------------------------- evaluator

def evaluate(node: Node, mode: Mode | str = Mode.FLOATING) -> Probability:
    """Evaluate a tree in the requested representation.

    Combinator failures are re-raised as :class:`EvaluationError` carrying
    the span of the node that failed.
    """
    mode = Mode(mode)
    if isinstance(node, Literal):
        return node.value.to(mode)
    if isinstance(node, Count):
        raise EvaluationError("a bare count is not a probability", node.span)
    try:
        if isinstance(node, Complement):
            return complement(evaluate(node.child, mode))
        if isinstance(node, Product):
            return product([evaluate(c, mode) for c in node.children], mode)
        if isinstance(node, CmpeAdd):
            return comb.cmpe_add([evaluate(c, mode) for c in node.children], mode)
        if isinstance(node, DpeSub):
            m = evaluate(node.minuend, mode)
            return comb.dpe_sub(m, [evaluate(c, mode) for c in node.subtrahends], mode)
        if isinstance(node, Call):
            return _call(node, mode)
    except EvaluationError:
        raise
    except (ProbabilityError, ValueError, ZeroDivisionError) as exc:
        raise EvaluationError(f"{type(exc).__name__}: {exc}", node.span, exc) from exc
    raise TypeError(f"not an expression node: {node!r}")


def _call(node: Call, mode: Mode) -> Probability:
    if node.name == "laplace":
        m, n = (a.value for a in node.args)
        return comb.laplace_succession(m, n, mode)
    args = [evaluate(a, mode) for a in node.args]
    if node.name == "bayes":
        return comb.bayes_posterior(*args, mode=mode)
    report = broad_chain(args[0], args[1:], mode)
    if not report.valid:
        raise ChainOverflow(report)
    return Probability(report.raw_value, mode)


def evaluate_source(text: str, mode: Mode | str = Mode.FLOATING) -> Probability:
    return evaluate(parse_expression(text), mode)
