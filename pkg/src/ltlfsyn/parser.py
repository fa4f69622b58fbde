"""Recursive-descent parser for the textual LTLf syntax.

Precedence from loosest to tightest: ``->``/``<->``, ``|``, ``&``, ``U``/``R``,
then the prefix operators ``!``, ``X``, ``N``, ``F``, ``G``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .formula import Formula, FormulaStore, default_store


class LTLfSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class UndeclaredCharacterError(LTLfSyntaxError):
    pass


@dataclass
class Token:
    kind: str
    text: str
    pos: int


_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<op><->|->|&&|\|\||[&|!~()])"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
)

_KEYWORDS = {
    "X": "X", "N": "N", "WX": "N", "F": "F", "G": "G", "U": "U", "R": "R",
    "true": "true", "True": "true", "TRUE": "true",
    "false": "false", "False": "false", "FALSE": "false",
}
_ALIASES = {"&&": "&", "||": "|", "~": "!"}


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            line, col = _line_col(text, pos)
            raise UndeclaredCharacterError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        word = m.group()
        if kind == "op":
            tokens.append(Token(_ALIASES.get(word, word), word, pos))
        elif kind == "ident":
            tokens.append(Token(_KEYWORDS.get(word, "ident"), word, pos))
        pos = m.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, store: FormulaStore):
        self.text = text
        self.store = store
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def take(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, tok: Token, message: str):
        line, col = _line_col(self.text, tok.pos)
        return LTLfSyntaxError(message, line, col)

    def expect(self, kind: str) -> Token:
        tok = self.take()
        if tok.kind != kind:
            found = tok.text or "end of input"
            raise self.error(tok, f"expected {kind!r} but found {found!r}")
        return tok

    def parse(self) -> Formula:
        f = self.implication()
        tok = self.peek()
        if tok.kind != "eof":
            raise self.error(tok, f"unexpected token {tok.text!r}")
        return f

    def implication(self) -> Formula:
        left = self.disjunction()
        tok = self.peek()
        if tok.kind in ("->", "<->"):
            self.take()
            right = self.implication()
            if tok.kind == "->":
                return self.store.implies(left, right)
            return self.store.iff(left, right)
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek().kind == "|":
            self.take()
            f = self.store.or_(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.binary_temporal()
        while self.peek().kind == "&":
            self.take()
            f = self.store.and_(f, self.binary_temporal())
        return f

    def binary_temporal(self) -> Formula:
        left = self.unary()
        tok = self.peek()
        if tok.kind in ("U", "R"):
            self.take()
            right = self.binary_temporal()
            if tok.kind == "U":
                return self.store.until(left, right)
            return self.store.release(left, right)
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        s = self.store
        if tok.kind == "!":
            self.take()
            nxt = self.peek()
            if nxt.kind == "ident":
                self.take()
                return s.lit(nxt.text, False)
            return s.not_(self.unary())
        if tok.kind in ("X", "N", "F", "G"):
            self.take()
            body = self.unary()
            return {"X": s.next_, "N": s.wnext, "F": s.eventually, "G": s.always}[tok.kind](body)
        return self.atom()

    def atom(self) -> Formula:
        tok = self.take()
        if tok.kind == "ident":
            return self.store.lit(tok.text)
        if tok.kind == "true":
            return self.store.tt
        if tok.kind == "false":
            return self.store.ff
        if tok.kind == "(":
            f = self.implication()
            self.expect(")")
            return f
        found = tok.text or "end of input"
        raise self.error(tok, f"unexpected {found!r}")


def parse(text: str, store: FormulaStore | None = None) -> Formula:
    """Parse ``text`` into a raw formula (may contain ``!``, ``->`` and ``<->`` nodes)."""
    return _Parser(text, store or default_store()).parse()


def parse_nnf(text: str, store: FormulaStore | None = None) -> Formula:
    from .formula import to_nnf

    return to_nnf(parse(text, store))
