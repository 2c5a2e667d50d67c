"""Tokenizer shared by the specification, requirements, and problem-diagram
parsers.

Keywords are reserved in every file format so that diagnostics stay uniform.
`--` starts a line comment.  The comparison operators may be written either
in ASCII (`!=`, `<=`, `>=`) or with the usual mathematical glyphs
(`≠`, `≤`, `≥`); the lexer normalizes to the ASCII spelling.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .diagnostics import Span, SpecError, error

KEYWORDS = frozenset(
    {
        # specification language
        "specification", "type", "int", "component", "input", "output",
        "internal", "init", "assign", "when", "then", "else", "table", "in",
        "statemachine", "initial", "state", "goto", "invariant", "trace",
        "T", "F", "TRUE", "FALSE",
        # problem diagrams
        "problem", "machine", "domain", "kind", "interface", "requirement",
        "constrains", "refs",
        # requirements files
        "phase",
    }
)

# Longest operators first so maximal munch wins.
_OPERATORS = ["<->", "..", "!=", "<=", ">=", "=", "<", ">", ":", ";",
              "{", "}", "(", ")", "[", "]", ",", "."]

_UNICODE_OPS = {"≠": "!=", "≤": "<=", "≥": ">="}

_REQID_RE = re.compile(r"REQ-[A-Za-z0-9_]+")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT_RE = re.compile(r"-?[0-9]+")


@dataclass(frozen=True)
class Token:
    kind: str  # "ID" | "INT" | "STRING" | "REQID" | "EOF" | keyword | operator
    value: str
    span: Span

    def describe(self) -> str:
        if self.kind == "EOF":
            return "end of file"
        if self.kind in ("ID", "INT", "STRING", "REQID"):
            return f"{self.kind.lower()} '{self.value}'"
        return f"'{self.value}'"


def tokenize(text: str, filename: str) -> list[Token]:
    tokens: list[Token] = []
    line = 1
    col = 1
    i = 0
    n = len(text)

    def span(length: int) -> Span:
        return Span(filename, line, col, length)

    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("--", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == '"':
            end = i + 1
            chunks = []
            while end < n and text[end] != '"':
                if text[end] == "\n":
                    raise SpecError(error("Syntax", "unterminated string", span(end - i)))
                if text[end] == "\\" and end + 1 < n and text[end + 1] in ('"', "\\"):
                    chunks.append(text[end + 1])
                    end += 2
                else:
                    chunks.append(text[end])
                    end += 1
            if end >= n:
                raise SpecError(error("Syntax", "unterminated string", span(end - i)))
            tokens.append(Token("STRING", "".join(chunks), span(end + 1 - i)))
            col += end + 1 - i
            i = end + 1
            continue
        if ch in _UNICODE_OPS:
            tokens.append(Token(_UNICODE_OPS[ch], _UNICODE_OPS[ch], span(1)))
            i += 1
            col += 1
            continue
        m = _REQID_RE.match(text, i)
        if m:
            tokens.append(Token("REQID", m.group(), span(len(m.group()))))
            col += len(m.group())
            i = m.end()
            continue
        m = _IDENT_RE.match(text, i)
        if m:
            word = m.group()
            kind = word if word in KEYWORDS else "ID"
            tokens.append(Token(kind, word, span(len(word))))
            col += len(word)
            i = m.end()
            continue
        m = _INT_RE.match(text, i)
        if m:
            tokens.append(Token("INT", m.group(), span(len(m.group()))))
            col += len(m.group())
            i = m.end()
            continue
        for op in _OPERATORS:
            if text.startswith(op, i):
                tokens.append(Token(op, op, span(len(op))))
                col += len(op)
                i += len(op)
                break
        else:
            raise SpecError(error("Syntax", f"unexpected character {ch!r}", span(1)))
    tokens.append(Token("EOF", "", Span(filename, line, col, 0)))
    return tokens
