"""Tokenizer and reader for the s-expressions PDDL is written in."""

from __future__ import annotations

import re
from dataclasses import dataclass

_TOKEN = re.compile(r"\(|\)|[^\s()]+")


class PDDLSyntaxError(ValueError):
    """Raised for malformed input. Carries a 1-based line/column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    column: int


class SList(list):
    """A parenthesised list that remembers where it opened."""

    line = 0
    column = 0


def tokenize(text: str) -> list[Token]:
    tokens = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(";", 1)[0]
        for m in _TOKEN.finditer(line):
            tokens.append(Token(m.group(0), lineno, m.start() + 1))
    return tokens


def read(text: str):
    """Read exactly one s-expression. Atoms are returned lowercased as ``str``."""
    tokens = tokenize(text)
    if not tokens:
        raise PDDLSyntaxError("empty input", 1, 1)
    expr, pos = _read(tokens, 0)
    if pos != len(tokens):
        t = tokens[pos]
        raise PDDLSyntaxError(f"unexpected trailing token {t.text!r}", t.line, t.column)
    return expr


def _read(tokens: list[Token], pos: int):
    tok = tokens[pos]
    if tok.text == ")":
        raise PDDLSyntaxError("unbalanced ')'", tok.line, tok.column)
    if tok.text != "(":
        return tok.text.lower(), pos + 1
    out = SList()
    out.line, out.column = tok.line, tok.column
    pos += 1
    while True:
        if pos >= len(tokens):
            raise PDDLSyntaxError("unclosed '('", tok.line, tok.column)
        if tokens[pos].text == ")":
            return out, pos + 1
        item, pos = _read(tokens, pos)
        out.append(item)


def where(expr) -> tuple[int, int]:
    return getattr(expr, "line", 0), getattr(expr, "column", 0)
