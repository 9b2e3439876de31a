"""Concrete syntax for terms, specifications and equation documents.

Lexical conventions: identifiers starting with a lowercase letter are action
names, identifiers starting with an uppercase letter or underscore are
variables.  Trailing primes are allowed on both, so machine-generated fresh
names survive a print/parse round trip.  ``#`` starts a comment running to end
of line.  The keywords ``actions``, ``term``, ``spec``, ``eq`` and ``delta``
are reserved.

Document grammar::

    document := (decl ";")*
    decl     := "actions" name ("," name)*
              | "term" name "=" term
              | "spec" name "{" bindings "}"
              | "eq" name ":" term "=" term
    term     := term "+" term | term "." term | "(" term ")"
              | "delta" | name | "<" var "|" bindings ">"
    bindings := var "=" term ("," var "=" term)* (",")?

``.`` binds tighter than ``+``; both are left-associative.  Within a document
every action occurring in a term must have been declared by a preceding
``actions`` line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .syntax import Act, Deadlock, Equation, Rec, RecSpec, Seq, Sum, Term, Var, action_names


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


KEYWORDS = frozenset({"actions", "term", "spec", "eq", "delta"})

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*'*)
  | (?P<punct><|>|\||\(|\)|\+|\.|=|,|\{|\}|;|:)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "name", "punct", "eof"
    text: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", line, col)
        kind = m.lastgroup
        text = m.group()
        if kind == "newline":
            line += 1
            col = 1
        else:
            if kind in ("name", "punct"):
                tokens.append(Token(kind, text, line, col))
            col += len(text)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


def is_action_name(name: str) -> bool:
    return name[0].islower() and name not in KEYWORDS


def is_variable_name(name: str) -> bool:
    return (name[0].isupper() or name[0] == "_") and name not in KEYWORDS


@dataclass
class _Parser:
    tokens: list[Token]
    pos: int = 0

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.cur.line, self.cur.col)

    def advance(self) -> Token:
        tok = self.cur
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        if self.cur.kind in ("punct", "name") and self.cur.text == text:
            return self.advance()
        shown = self.cur.text if self.cur.kind != "eof" else "end of input"
        raise self.error(f"expected {text!r}, found {shown!r}")

    def at(self, text: str) -> bool:
        return self.cur.kind in ("punct", "name") and self.cur.text == text

    def term(self) -> Term:
        t = self.seq()
        while self.at("+"):
            self.advance()
            t = Sum(t, self.seq())
        return t

    def seq(self) -> Term:
        t = self.atom()
        while self.at("."):
            self.advance()
            t = Seq(t, self.atom())
        return t

    def atom(self) -> Term:
        tok = self.cur
        if tok.kind == "name":
            if tok.text == "delta":
                self.advance()
                return Deadlock()
            if tok.text in KEYWORDS:
                raise self.error(f"keyword {tok.text!r} cannot be used in a term")
            self.advance()
            if is_variable_name(tok.text):
                return Var(tok.text)
            return Act(tok.text)
        if self.at("("):
            self.advance()
            t = self.term()
            self.expect(")")
            return t
        if self.at("<"):
            return self.rec()
        shown = tok.text if tok.kind != "eof" else "end of input"
        raise self.error(f"expected a term, found {shown!r}")

    def variable(self) -> str:
        tok = self.cur
        if tok.kind != "name" or not is_variable_name(tok.text):
            shown = tok.text if tok.kind != "eof" else "end of input"
            raise self.error(f"expected a variable, found {shown!r}")
        self.advance()
        return tok.text

    def name(self) -> str:
        tok = self.cur
        if tok.kind != "name" or tok.text in KEYWORDS:
            shown = tok.text if tok.kind != "eof" else "end of input"
            raise self.error(f"expected a name, found {shown!r}")
        self.advance()
        return tok.text

    def bindings(self, closing: str) -> RecSpec:
        pairs: list[tuple[str, Term]] = []
        seen: set[str] = set()
        while True:
            tok = self.cur
            name = self.variable()
            if name in seen:
                raise ParseError(f"duplicate binding for {name!r}", tok.line, tok.col)
            seen.add(name)
            self.expect("=")
            pairs.append((name, self.term()))
            if self.at(","):
                self.advance()
                if self.at(closing):  # trailing comma
                    break
                continue
            break
        return RecSpec(pairs)

    def rec(self) -> Term:
        self.expect("<")
        binder_tok = self.cur
        binder = self.variable()
        self.expect("|")
        spec = self.bindings(">")
        self.expect(">")
        if binder not in spec:
            raise ParseError(
                f"recursion binder {binder!r} is not defined by its specification",
                binder_tok.line,
                binder_tok.col,
            )
        return Rec(binder, spec)

    def spec_literal(self) -> RecSpec:
        self.expect("{")
        spec = self.bindings("}")
        self.expect("}")
        return spec


def _parse_with(source: str, production):
    parser = _Parser(tokenize(source))
    result = production(parser)
    if parser.cur.kind != "eof":
        raise parser.error(f"unexpected trailing input {parser.cur.text!r}")
    return result


def parse_term(source: str) -> Term:
    return _parse_with(source, _Parser.term)


def parse_spec(source: str) -> RecSpec:
    """Parse a ``{X = t, ...}`` specification literal."""
    return _parse_with(source, _Parser.spec_literal)


@dataclass
class Document:
    """A parsed workbench document.

    ``actions`` is the declared alphabet (sorted); ``specs``, ``terms`` and
    ``equations`` hold the named declarations in file order.
    """

    actions: tuple[str, ...] = ()
    specs: dict[str, RecSpec] = field(default_factory=dict)
    terms: dict[str, Term] = field(default_factory=dict)
    equations: dict[str, Equation] = field(default_factory=dict)


def parse_document(source: str) -> Document:
    parser = _Parser(tokenize(source))
    doc = Document()

    def check_alphabet(t: Term, where: Token) -> None:
        undeclared = sorted(action_names(t) - set(doc.actions))
        if undeclared:
            raise ParseError(
                f"action {undeclared[0]!r} is not declared (actions: "
                f"{', '.join(doc.actions) or 'none'})",
                where.line,
                where.col,
            )

    def fresh_decl(table: dict, kind: str) -> str:
        tok = parser.cur
        name = parser.name()
        if name in table:
            raise ParseError(f"duplicate {kind} declaration {name!r}", tok.line, tok.col)
        return name

    while parser.cur.kind != "eof":
        tok = parser.cur
        if tok.kind != "name" or tok.text not in ("actions", "term", "spec", "eq"):
            shown = tok.text if tok.kind != "eof" else "end of input"
            raise parser.error(f"expected a declaration, found {shown!r}")
        if tok.text == "actions":
            parser.advance()
            names = []
            while True:
                name_tok = parser.cur
                name = parser.name()
                if not is_action_name(name):
                    raise ParseError(
                        f"action names start lowercase, found {name!r}",
                        name_tok.line,
                        name_tok.col,
                    )
                names.append(name)
                if parser.at(","):
                    parser.advance()
                    continue
                break
            doc.actions = tuple(sorted(set(doc.actions) | set(names)))
        elif tok.text == "term":
            parser.advance()
            name = fresh_decl(doc.terms, "term")
            parser.expect("=")
            body_tok = parser.cur
            body = parser.term()
            check_alphabet(body, body_tok)
            doc.terms[name] = body
        elif tok.text == "spec":
            parser.advance()
            name = fresh_decl(doc.specs, "spec")
            body_tok = parser.cur
            spec = parser.spec_literal()
            for _, rhs in spec.items():
                check_alphabet(rhs, body_tok)
            doc.specs[name] = spec
        else:  # eq
            parser.advance()
            name = fresh_decl(doc.equations, "eq")
            parser.expect(":")
            body_tok = parser.cur
            lhs = parser.term()
            parser.expect("=")
            rhs = parser.term()
            check_alphabet(lhs, body_tok)
            check_alphabet(rhs, body_tok)
            doc.equations[name] = Equation(lhs, rhs)
        parser.expect(";")
    return doc
