"""Line-oriented text format for ELH knowledge bases.

::

    # comment
    Male SubClassOf Person
    Male and hasSibling some Female SubClassOf Brother
    hasSon SubRoleOf hasChild
    Male(anna)
    hasChild(anna, alex)

``some`` binds tighter than ``and``; ``Thing`` is the top concept.  ``⊑``
and ``⊓`` are accepted as aliases of ``SubClassOf`` and ``and``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .model import (
    Atomic, ConceptAssertion, ConceptInclusion, Existential, Intersection,
    KnowledgeBase, RoleAssertion, RoleInclusion, SymbolKind, Top, intersect,
    is_top, sort_key, sorted_assertions,
)

KEYWORDS = {"SubClassOf", "SubRoleOf", "and", "some", "Thing"}
_ALIASES = {"⊑": "SubClassOf", "⊓": "and"}

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#.*)
  | (?P<name>[A-Za-z_][A-Za-z0-9_-]*)
  | (?P<punct>[(),])
  | (?P<alias>[⊑⊓])
""", re.VERBOSE)


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    message: str
    severity: str = "error"

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.severity}: {self.message}"


class ParseError(ValueError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


@dataclass(frozen=True)
class _Tok:
    kind: str  # "name", "kw", "punct", "eol"
    text: str
    line: int
    col: int


class _Fail(Exception):
    def __init__(self, tok: _Tok, message: str):
        self.diag = ParseDiagnostic(tok.line, tok.col, message)


def _tokenize(text: str, line: int) -> list:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise _Fail(_Tok("bad", text[pos], line, pos + 1),
                        f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        word = m.group()
        if kind == "name":
            toks.append(_Tok("kw" if word in KEYWORDS else "name", word, line, pos + 1))
        elif kind == "punct":
            toks.append(_Tok("punct", word, line, pos + 1))
        elif kind == "alias":
            toks.append(_Tok("kw", _ALIASES[word], line, pos + 1))
        elif kind == "comment":
            break
        pos = m.end()
    toks.append(_Tok("eol", "", line, len(text) + 1))
    return toks


def _describe(tok: _Tok) -> str:
    return "end of line" if tok.kind == "eol" else repr(tok.text)


class _Line:
    """Recursive-descent parser over the tokens of one line."""

    def __init__(self, toks):
        self.toks = toks
        self.i = 0
        # (name, kind, token) triples recorded for the global kind check
        self.uses = []

    def peek(self, k: int = 0) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> _Tok:
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, kind: str, text: Optional[str] = None) -> _Tok:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = repr(text) if text else kind
            raise _Fail(tok, f"expected {want}, found {_describe(tok)}")
        return self.next()

    def name(self, kind: SymbolKind) -> str:
        tok = self.peek()
        if tok.kind != "name":
            raise _Fail(tok, f"expected a {kind.value}, found {_describe(tok)}")
        self.next()
        self.uses.append((tok.text, kind, tok))
        return tok.text

    def concept(self):
        parts = [self.prim()]
        while self.peek().kind == "kw" and self.peek().text == "and":
            self.next()
            parts.append(self.prim())
        return intersect(*parts)

    def prim(self):
        tok = self.peek()
        if tok.kind == "kw" and tok.text == "Thing":
            self.next()
            return Top
        if tok.kind == "punct" and tok.text == "(":
            self.next()
            c = self.concept()
            self.expect("punct", ")")
            return c
        if tok.kind == "name":
            nxt = self.peek(1)
            if nxt.kind == "kw" and nxt.text == "some":
                role = self.name(SymbolKind.ROLE)
                self.next()
                return Existential(role, self.prim())
            return Atomic(self.name(SymbolKind.CONCEPT))
        raise _Fail(tok, f"expected a concept, found {_describe(tok)}")

    def end(self):
        tok = self.peek()
        if tok.kind != "eol":
            raise _Fail(tok, f"unexpected {_describe(tok)}")

    def statement(self):
        texts = [(t.kind, t.text) for t in self.toks]
        if ("kw", "SubRoleOf") in texts:
            sub = self.name(SymbolKind.ROLE)
            self.expect("kw", "SubRoleOf")
            sup = self.name(SymbolKind.ROLE)
            self.end()
            return RoleInclusion(sub, sup)
        if ("kw", "SubClassOf") in texts:
            lhs = self.concept()
            self.expect("kw", "SubClassOf")
            rhs = self.concept()
            self.end()
            return ConceptInclusion(lhs, rhs)
        return self.assertion()

    def assertion(self):
        first = self.peek()
        if first.kind == "name" and self.peek(1).kind == "punct" and self.peek(1).text == "(":
            head = first.text
            self.i += 1
            self.expect("punct", "(")
            a = self.name(SymbolKind.INDIVIDUAL)
            if self.peek().kind == "punct" and self.peek().text == ",":
                self.next()
                b = self.name(SymbolKind.INDIVIDUAL)
                self.expect("punct", ")")
                self.end()
                self.uses.append((head, SymbolKind.ROLE, first))
                return RoleAssertion(head, a, b)
            self.expect("punct", ")")
            self.end()
            self.uses.append((head, SymbolKind.CONCEPT, first))
            return ConceptAssertion(head, a)
        # Anything else without SubClassOf: either a complex assertion or garbage.
        start = self.i
        try:
            self.concept()
        except _Fail:
            self.i = start
            raise _Fail(first, f"expected an axiom or assertion, found {_describe(first)}")
        if self.peek().kind == "punct" and self.peek().text == "(":
            raise _Fail(first, "ABox concept assertions must use a concept name, "
                               "not a complex concept")
        raise _Fail(self.peek(), f"expected 'SubClassOf', found {_describe(self.peek())}")


def _parse(text: str):
    diags = []
    statements = []
    seen = {}
    kinds = {}
    for lineno, raw in enumerate(text.split("\n"), start=1):
        try:
            toks = _tokenize(raw, lineno)
            if toks[0].kind == "eol":
                continue
            p = _Line(toks)
            stmt = p.statement()
        except _Fail as e:
            diags.append(e.diag)
            continue
        clash = None
        for name, kind, tok in p.uses:
            prev = kinds.get(name)
            if prev is None:
                kinds[name] = (kind, tok)
            elif prev[0] != kind:
                clash = ParseDiagnostic(
                    tok.line, tok.col,
                    f"{name!r} used as a {kind.value} but line {prev[1].line} "
                    f"uses it as a {prev[0].value}")
                break
        if clash:
            diags.append(clash)
            continue
        if stmt in seen:
            diags.append(ParseDiagnostic(lineno, 1, f"duplicate statement (first on line {seen[stmt]})",
                                         "warning"))
            continue
        seen[stmt] = lineno
        statements.append(stmt)
    return statements, diags


def check_kb(text: str):
    """Parse ``text`` and return ``(kb or None, diagnostics)``."""
    statements, diags = _parse(text)
    if any(d.severity == "error" for d in diags):
        return None, diags
    tbox = [s for s in statements if isinstance(s, (ConceptInclusion, RoleInclusion))]
    abox = [s for s in statements if isinstance(s, (ConceptAssertion, RoleAssertion))]
    return KnowledgeBase(frozenset(tbox), frozenset(abox)), diags


def parse_kb(text: str) -> KnowledgeBase:
    """Parse a KB file. Raises :class:`ParseError` listing every error."""
    kb, diags = check_kb(text)
    if kb is None:
        raise ParseError([d for d in diags if d.severity == "error"])
    return kb


def parse_concept(text: str):
    try:
        toks = _tokenize(text, 1)
        p = _Line(toks)
        c = p.concept()
        p.end()
    except _Fail as e:
        raise ParseError([e.diag]) from None
    kinds = {}
    for name, kind, tok in p.uses:
        if kinds.setdefault(name, kind) != kind:
            raise ParseError([ParseDiagnostic(tok.line, tok.col,
                                              f"{name!r} used as both a concept and a role")])
    return c


# ---------------------------------------------------------------- serialization

def _prim(c) -> str:
    s = format_concept(c)
    return f"({s})" if isinstance(c, Intersection) else s


def format_concept(c) -> str:
    if is_top(c):
        return "Thing"
    if isinstance(c, Atomic):
        return c.name
    if isinstance(c, Existential):
        return f"{c.role} some {_prim(c.filler)}"
    return " and ".join(_prim(d) for d in c.conjuncts)


def format_axiom(ax) -> str:
    if isinstance(ax, RoleInclusion):
        return f"{ax.sub} SubRoleOf {ax.sup}"
    if isinstance(ax, ConceptInclusion):
        return f"{format_concept(ax.lhs)} SubClassOf {format_concept(ax.rhs)}"
    if isinstance(ax, ConceptAssertion):
        return f"{ax.concept}({ax.individual})"
    return f"{ax.role}({ax.subject}, {ax.object})"


def serialize_kb(kb: KnowledgeBase) -> str:
    """Canonical text: role axioms, concept axioms, then assertions, each sorted."""
    roles = sorted((ax for ax in kb.tbox if isinstance(ax, RoleInclusion)),
                   key=lambda ax: (ax.sub, ax.sup))
    gcis = sorted((ax for ax in kb.tbox if isinstance(ax, ConceptInclusion)),
                  key=lambda ax: (sort_key(ax.lhs), sort_key(ax.rhs)))
    lines = [format_axiom(ax) for ax in roles + gcis + sorted_assertions(kb.abox)]
    return "".join(line + "\n" for line in lines)
