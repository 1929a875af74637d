"""Source positions, diagnostics and the exception hierarchy."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence


@dataclass(frozen=True)
class Span:
    line: int
    column: int
    length: int = 0
    file: str = "<input>"

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"
    NOTE = "note"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    message: str
    span: Span | None = None

    @classmethod
    def error(cls, message: str, span: Span | None = None) -> Diagnostic:
        return cls(Severity.ERROR, message, span)

    @classmethod
    def warning(cls, message: str, span: Span | None = None) -> Diagnostic:
        return cls(Severity.WARNING, message, span)

    @classmethod
    def note(cls, message: str, span: Span | None = None) -> Diagnostic:
        return cls(Severity.NOTE, message, span)

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def __str__(self) -> str:
        where = f"{self.span}: " if self.span is not None else ""
        return f"{where}{self.severity.value}: {self.message}"


def has_errors(diagnostics: Iterable[Diagnostic]) -> bool:
    return any(d.is_error for d in diagnostics)


class TDError(Exception):
    """Base class for every error raised by this package."""


class DiagnosticError(TDError):
    def __init__(self, diagnostics: Sequence[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


class LexError(DiagnosticError):
    pass


class ParseError(DiagnosticError):
    pass


class TypeGraphError(DiagnosticError):
    """The declarations do not form a valid type graph."""


class DuplicateAttributeError(TDError, ValueError):
    def __init__(self, name: str, what: str = "attribute"):
        self.name = name
        super().__init__(f"duplicate {what} name {name!r}")


class UnknownTypeError(TDError, KeyError):
    def __init__(self, name: object):
        self.name = name
        super().__init__(name)

    def __str__(self) -> str:
        return f"unknown type {self.name}"


class TypingError(TDError):
    """A value cannot be typed against the graph."""


class NotUniqueError(TypingError):
    kind = "type"

    def __init__(self, candidates: Iterable[object]):
        self.candidates = sorted(candidates, key=str)
        names = ", ".join(str(c) for c in self.candidates)
        super().__init__(f"{self.kind} is not unique; incomparable candidates: {names}")


class MstNotUnique(NotUniqueError):
    kind = "most specific type"


class LstNotUnique(NotUniqueError):
    kind = "least specific type"
