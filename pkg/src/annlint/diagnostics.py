"""Source locations and diagnostics shared by every stage of the toolchain."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"
    NOTE = "note"


@dataclass(frozen=True)
class Span:
    """A half-open region of source text. Lines and columns are 1-based."""

    file: str
    line: int
    column: int
    length: int = 1

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


@dataclass
class Diagnostic:
    severity: Severity
    code: str
    message: str
    span: Span | None = field(default=None, compare=False)

    def format(self) -> str:
        """Render as ``file:line:col: severity[code]: message``."""
        prefix = str(self.span) if self.span is not None else "<unknown>"
        return f"{prefix}: {self.severity.value}[{self.code}]: {self.message}"


def has_errors(diagnostics: list[Diagnostic]) -> bool:
    return any(d.severity is Severity.ERROR for d in diagnostics)


def format_all(diagnostics: list[Diagnostic]) -> str:
    return "\n".join(d.format() for d in diagnostics)
