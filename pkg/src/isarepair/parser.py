"""Parser and serializer for the native ontology text format.

Grammar (UTF-8, ';'-terminated statements, '#' line comments)::

    role <ident> ;
    concept <ident> := <expr> ;     # definition
    concept <ident> <= <expr> ;     # bound (primitive) statement
    <expr> ::= "top" | "bot" | <ident> | "not" <expr> | <expr> "and" <expr>
             | <expr> "or" <expr> | "some" <ident> "." <expr>
             | "all" <ident> "." <expr> | "(" <expr> ")"

Precedence: ``not``/quantifiers bind tightest, then ``and``, then ``or``;
a quantifier's filler is a unary expression, so ``some r . A and B`` reads
as ``(some r . A) and B``.  Binary operators associate to the right.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import model
from .model import (
    And,
    Atom,
    Axiom,
    BAR_MARKER,
    BOTTOM,
    Concept,
    ConceptName,
    Definition,
    Exists,
    Forall,
    IsaStatement,
    Not,
    Or,
    Primitive,
    TOP,
    Terminology,
    and_parts,
    bar_of,
    conjoin,
    names_in,
)

KEYWORDS = {"role", "concept", "top", "bot", "not", "and", "or", "some", "all"}


@dataclass(frozen=True)
class SourceDiagnostic:
    """1-based position of the first problem found in an input document."""

    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.message}"


class ParseError(Exception):
    def __init__(self, diagnostic: SourceDiagnostic):
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic

    code = "parse_error"


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Token:
    kind: str  # 'ident', 'symbol', 'eof'
    text: str
    line: int
    column: int


_SYMBOLS = (":=", "<=", ";", ".", "(", ")")


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == BAR_MARKER:
            raise ParseError(SourceDiagnostic(line, col, "reserved marker character in identifier"))
        if ch.isalpha() or ch == "_":
            start = i
            start_col = col
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
                col += 1
            word = text[start:i]
            if word[0] == "_":
                raise ParseError(SourceDiagnostic(line, start_col, "identifiers must start with a letter"))
            tokens.append(_Token("ident", word, line, start_col))
            continue
        matched = False
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(_Token("symbol", sym, line, col))
                i += len(sym)
                col += len(sym)
                matched = True
                break
        if not matched:
            raise ParseError(SourceDiagnostic(line, col, f"unexpected character {ch!r}"))
    tokens.append(_Token("eof", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# Recursive-descent parser
# ---------------------------------------------------------------------------

class _Parser:
    def __init__(self, tokens: list[_Token], roles: set[str]):
        self.tokens = tokens
        self.pos = 0
        self.roles = roles

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, tok: _Token, message: str) -> ParseError:
        return ParseError(SourceDiagnostic(tok.line, tok.column, message))

    def expect_symbol(self, sym: str) -> _Token:
        tok = self.peek()
        if tok.kind == "symbol" and tok.text == sym:
            return self.advance()
        raise self.fail(tok, f"expected '{sym}'")

    def expect_ident(self, what: str = "identifier") -> _Token:
        tok = self.peek()
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            return self.advance()
        raise self.fail(tok, f"expected {what}")

    def at_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "ident" and tok.text == word

    # expr := or_expr
    def parse_expr(self) -> Concept:
        return self.parse_or()

    def parse_or(self) -> Concept:
        left = self.parse_and()
        if self.at_keyword("or"):
            self.advance()
            return Or(left, self.parse_or())
        return left

    def parse_and(self) -> Concept:
        left = self.parse_unary()
        if self.at_keyword("and"):
            self.advance()
            return And(left, self.parse_and())
        return left

    def parse_unary(self) -> Concept:
        tok = self.peek()
        if self.at_keyword("not"):
            self.advance()
            return Not(self.parse_unary())
        if self.at_keyword("some") or self.at_keyword("all"):
            quant = self.advance().text
            role_tok = self.expect_ident("role name")
            if role_tok.text not in self.roles:
                raise self.fail(role_tok, f"role '{role_tok.text}' is not declared")
            self.expect_symbol(".")
            filler = self.parse_unary()
            ctor = Exists if quant == "some" else Forall
            return ctor(role_tok.text, filler)
        if self.at_keyword("top"):
            self.advance()
            return TOP
        if self.at_keyword("bot"):
            self.advance()
            return BOTTOM
        if tok.kind == "symbol" and tok.text == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect_symbol(")")
            return inner
        ident = self.expect_ident("concept expression")
        return Atom(ConceptName(ident.text))

    def parse_document(self) -> tuple[list[Axiom], set[str]]:
        axioms: list[Axiom] = []
        while self.peek().kind != "eof":
            tok = self.peek()
            if self.at_keyword("role"):
                self.advance()
                role = self.expect_ident("role name")
                self.expect_symbol(";")
                self.roles.add(role.text)
            elif self.at_keyword("concept"):
                self.advance()
                cname = self.expect_ident("concept name")
                op = self.peek()
                if op.kind == "symbol" and op.text == ":=":
                    self.advance()
                    body = self.parse_expr()
                    self.expect_symbol(";")
                    axioms.append(Definition(ConceptName(cname.text), body))
                elif op.kind == "symbol" and op.text == "<=":
                    self.advance()
                    bound = self.parse_expr()
                    self.expect_symbol(";")
                    axioms.append(Primitive(ConceptName(cname.text), bound))
                else:
                    raise self.fail(op, "expected ':=' or '<='")
            else:
                raise self.fail(tok, "expected 'role' or 'concept'")
        return axioms, self.roles


def parse_ontology(text: str) -> tuple[list[Axiom], set[str]]:
    """Parse an ontology document into axioms (in source order) and roles."""

    tokens = _tokenize(text)
    return _Parser(tokens, set()).parse_document()


def parse_concept(text: str, roles: set[str] | frozenset[str]) -> Concept:
    """Parse a single concept expression against a known role set."""

    tokens = _tokenize(text)
    parser = _Parser(tokens, set(roles))
    expr = parser.parse_expr()
    tok = parser.peek()
    if tok.kind != "eof":
        raise parser.fail(tok, "trailing input after expression")
    return expr


def parse_missing(text: str) -> list[IsaStatement]:
    """Parse a missing-relations list: one ``A <= B`` per non-empty line."""

    out: list[IsaStatement] = []
    seen: set[IsaStatement] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split("<=")
        if len(parts) != 2:
            raise ParseError(SourceDiagnostic(lineno, 1, "expected '<ident> <= <ident>'"))
        sub_text, sup_text = parts[0].strip(), parts[1].strip()
        for t in (sub_text, sup_text):
            if not t or not (t[0].isalpha() and all(c.isalnum() or c == "_" for c in t)):
                raise ParseError(SourceDiagnostic(lineno, 1, f"invalid concept name {t!r}"))
            if t in KEYWORDS:
                raise ParseError(SourceDiagnostic(lineno, 1, f"reserved word {t!r} used as concept name"))
        if sub_text == sup_text:
            raise ParseError(SourceDiagnostic(lineno, 1, f"self-subsumption '{sub_text} <= {sup_text}'"))
        stmt = IsaStatement(ConceptName(sub_text), ConceptName(sup_text))
        if stmt not in seen:
            seen.add(stmt)
            out.append(stmt)
    return out


# ---------------------------------------------------------------------------
# Serializer
# ---------------------------------------------------------------------------

_PREC_OR = 1
_PREC_AND = 2
_PREC_UNARY = 3


def render_concept(c: Concept) -> str:
    return _render(c, 0)


def _render(c: Concept, parent_prec: int) -> str:
    if isinstance(c, model.Top):
        return "top"
    if isinstance(c, model.Bottom):
        return "bot"
    if isinstance(c, Atom):
        return str(c.name)
    if isinstance(c, Not):
        return "not " + _render(c.inner, _PREC_UNARY)
    if isinstance(c, Exists):
        return f"some {c.role} . " + _render(c.filler, _PREC_UNARY)
    if isinstance(c, Forall):
        return f"all {c.role} . " + _render(c.filler, _PREC_UNARY)
    if isinstance(c, And):
        # right-fold grammar: a left child at the same level needs parens
        text = _render(c.left, _PREC_AND + 1) + " and " + _render(c.right, _PREC_AND)
        return f"({text})" if parent_prec > _PREC_AND else text
    if isinstance(c, Or):
        text = _render(c.left, _PREC_OR + 1) + " or " + _render(c.right, _PREC_OR)
        return f"({text})" if parent_prec > _PREC_OR else text
    raise TypeError(f"not a concept expression: {c!r}")


def serialize_ontology(t: Terminology) -> str:
    """Serialize so that parse + normalize reproduces ``t`` exactly.

    Definitions carrying their own auxiliary conjunct are written back in
    bound form ``concept A <= rest;``; normalization regenerates the same
    auxiliary name, so the marker never appears in the text.
    """

    lines: list[str] = []
    for role in sorted(t.roles):
        lines.append(f"role {role};")

    occurring: set[ConceptName] = set()
    for _, body in t.definitions:
        occurring.update(names_in(body))

    for n in sorted(t.primitive_names, key=lambda x: x.text):
        if not n.bar and n not in occurring:
            lines.append(f"concept {n} <= top;")

    for n, body in t.definitions:
        parts = and_parts(body)
        if parts and parts[-1] == Atom(bar_of(n)):
            rest = parts[:-1]
            lines.append(f"concept {n} <= {render_concept(conjoin(rest))};")
        else:
            lines.append(f"concept {n} := {render_concept(body)};")

    return "\n".join(lines) + ("\n" if lines else "")
