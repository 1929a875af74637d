"""Tokenizer for type-definition source text."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .diagnostics import Diagnostic, LexError, Span

# Keywords match case-insensitively; ``canonical`` holds the normalized form.
KEYWORDS = {
    k.upper(): k
    for k in (
        "TYPE", "POSSREP", "CONSTRAINT", "IS", "UNION", "ORDINAL", "TUPLE",
        "RELATION", "VAR", "GEN", "INTEGER", "RATIONAL", "CHARACTER", "CHAR",
        "BOOLEAN", "alpha", "omega",
    )
}
PUNCTUATION = frozenset("{}[],;=")
# Characters that can only occur inside opaque expressions and literals.
OPERATOR_CHARS = frozenset("()<>+-*/.:|&!^%~≥≤≠")


class TokenKind(enum.Enum):
    KEYWORD = "keyword"
    IDENTIFIER = "identifier"
    PUNCTUATION = "punctuation"
    OPAQUE = "opaque-expression"
    EOF = "end of input"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    span: Span
    offset: int = 0
    canonical: str = ""

    @property
    def end(self) -> int:
        return self.offset + len(self.lexeme)

    def is_keyword(self, *names: str) -> bool:
        return self.kind is TokenKind.KEYWORD and self.canonical in names

    def is_punct(self, *chars: str) -> bool:
        return self.kind is TokenKind.PUNCTUATION and self.lexeme in chars

    def describe(self) -> str:
        if self.kind is TokenKind.EOF:
            return "end of input"
        return f"{self.kind.value} {self.lexeme!r}"


def _ident_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _ident_char(ch: str) -> bool:
    return ch.isalnum() or ch in "_#"


def tokenize(source: str, file: str = "<input>") -> list[Token]:
    """Split ``source`` into tokens, skipping whitespace and ``/* */`` comments.

    The returned list always ends with an EOF token. Raises :class:`LexError`
    on an unterminated comment or string, or an illegal character.
    """
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(source)

    def fail(message: str, length: int = 1):
        raise LexError([Diagnostic.error(message, Span(line, col, length, file))])

    def emit(kind: TokenKind, text: str, canonical: str = ""):
        tokens.append(Token(kind, text, Span(line, col, len(text), file), i, canonical or text))

    while i < n:
        ch = source[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch.isspace():
            i, col = i + 1, col + 1
            continue
        if source.startswith("/*", i):
            close = source.find("*/", i + 2)
            if close < 0:
                fail("unterminated comment", 2)
            chunk = source[i : close + 2]
            newlines = chunk.count("\n")
            if newlines:
                line += newlines
                col = len(chunk) - chunk.rfind("\n")
            else:
                col += len(chunk)
            i = close + 2
            continue
        if _ident_start(ch):
            j = i + 1
            while j < n and _ident_char(source[j]):
                j += 1
            text = source[i:j]
            canonical = KEYWORDS.get(text.upper())
            if canonical is not None:
                emit(TokenKind.KEYWORD, text, canonical)
            else:
                emit(TokenKind.IDENTIFIER, text)
        elif ch.isdigit():
            j = i + 1
            while j < n and source[j].isdigit():
                j += 1
            if j + 1 < n and source[j] == "." and source[j + 1].isdigit():
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            emit(TokenKind.OPAQUE, source[i:j])
        elif ch in "'\"":
            j = i + 1
            while j < n and source[j] != ch and source[j] != "\n":
                j += 1
            if j >= n or source[j] != ch:
                fail("unterminated string literal", j - i)
            j += 1
            emit(TokenKind.OPAQUE, source[i:j])
        elif ch == "#":
            j = i + 1
            emit(TokenKind.KEYWORD, "#")
        elif ch in PUNCTUATION:
            j = i + 1
            emit(TokenKind.PUNCTUATION, ch)
        elif ch in OPERATOR_CHARS:
            j = i + 1
            emit(TokenKind.OPAQUE, ch)
        else:
            fail(f"illegal character {ch!r}")
        col += j - i
        i = j

    tokens.append(Token(TokenKind.EOF, "", Span(line, col, 0, file), n, ""))
    return tokens
