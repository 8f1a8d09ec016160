"""Tokenizer for Solidity source text.

Produces a flat token stream with byte offsets. Comments are tokens (the
concrete tree keeps them; the transform rules drop them later). Whitespace
is not tokenized. Keywords are not distinguished from identifiers here; the
parser matches token text contextually.
"""

from __future__ import annotations

from dataclasses import dataclass


class ParseError(Exception):
    """Syntax error at a byte position; position names the earliest failure."""

    def __init__(self, position: int, message: str) -> None:
        super().__init__(f"parse error at byte {position}: {message}")
        self.position = position
        self.message = message


# Token kinds. PUNCT covers operators, delimiters, and keywords alike.
IDENT = "ident"
NUMBER = "number"
STRING = "string"
HEX_STRING = "hex_string"
COMMENT = "comment"
PUNCT = "punct"
EOF = "eof"


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    start: int
    end: int


# Longest match first.
_OPERATORS = [
    "<<=", ">>=",
    "**", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
    "==", "!=", "<=", ">=", "&&", "||", "<<", ">>", "++", "--",
    "=>", "->", ":=",
    "+", "-", "*", "/", "%", "=", "<", ">", "!", "&", "|", "^", "~",
    "?", ":", ";", ",", ".", "(", ")", "{", "}", "[", "]",
]

_IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_$")
_IDENT_CONT = _IDENT_START | set("0123456789")
_DIGITS = set("0123456789")
_HEX_DIGITS = set("0123456789abcdefABCDEF_")


def tokenize(source: str) -> list[Token]:
    """Tokenize ``source``; raises :class:`ParseError` on lexical errors.

    Offsets are character offsets into the source string, which equal byte
    offsets for ASCII sources. (Non-ASCII content only ever appears inside
    comments and string literals in practice; offsets stay consistent with
    the string indexing used everywhere else in the package.)
    """
    tokens: list[Token] = []
    i = 0
    n = len(source)
    while i < n:
        c = source[i]
        if c in " \t\r\n":
            i += 1
            continue
        if c == "/" and i + 1 < n:
            if source[i + 1] == "/":
                j = source.find("\n", i)
                j = n if j == -1 else j
                tokens.append(Token(COMMENT, source[i:j], i, j))
                i = j
                continue
            if source[i + 1] == "*":
                j = source.find("*/", i + 2)
                if j == -1:
                    raise ParseError(i, "unterminated block comment")
                tokens.append(Token(COMMENT, source[i : j + 2], i, j + 2))
                i = j + 2
                continue
        if c in _IDENT_START:
            j = i + 1
            while j < n and source[j] in _IDENT_CONT:
                j += 1
            word = source[i:j]
            # hex"..." and unicode"..." are single literal tokens.
            if word in ("hex", "unicode") and j < n and source[j] in "\"'":
                end = _scan_string(source, j)
                kind = HEX_STRING if word == "hex" else STRING
                tokens.append(Token(kind, source[i:end], i, end))
                i = end
                continue
            tokens.append(Token(IDENT, word, i, j))
            i = j
            continue
        if c in _DIGITS:
            j = _scan_number(source, i)
            tokens.append(Token(NUMBER, source[i:j], i, j))
            i = j
            continue
        if c in "\"'":
            end = _scan_string(source, i)
            tokens.append(Token(STRING, source[i:end], i, end))
            i = end
            continue
        for op in _OPERATORS:
            if source.startswith(op, i):
                tokens.append(Token(PUNCT, op, i, i + len(op)))
                i += len(op)
                break
        else:
            raise ParseError(i, f"unexpected character {c!r}")
    tokens.append(Token(EOF, "", n, n))
    return tokens


def _scan_string(source: str, start: int) -> int:
    quote = source[start]
    i = start + 1
    n = len(source)
    while i < n:
        c = source[i]
        if c == "\\":
            i += 2
            continue
        if c == quote:
            return i + 1
        if c == "\n":
            break
        i += 1
    raise ParseError(start, "unterminated string literal")


def _scan_number(source: str, start: int) -> int:
    n = len(source)
    i = start
    if source.startswith(("0x", "0X"), start):
        i += 2
        while i < n and source[i] in _HEX_DIGITS:
            i += 1
        return i
    while i < n and (source[i] in _DIGITS or source[i] == "_"):
        i += 1
    if i < n and source[i] == "." and i + 1 < n and source[i + 1] in _DIGITS:
        i += 1
        while i < n and (source[i] in _DIGITS or source[i] == "_"):
            i += 1
    if i < n and source[i] in "eE":
        j = i + 1
        if j < n and source[j] in "+-":
            j += 1
        if j < n and source[j] in _DIGITS:
            i = j
            while i < n and source[i] in _DIGITS:
                i += 1
    return i
