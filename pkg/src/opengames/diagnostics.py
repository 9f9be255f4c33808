from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class Span:
    """Half-open source region, 1-based lines and columns."""

    line: int
    col: int
    end_line: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}-{self.end_line}:{self.end_col}"


@dataclass(frozen=True)
class Diagnostic:
    rule: str
    message: str
    subject: str = ""
    span: Span | None = None
    severity: str = "error"

    def __str__(self) -> str:
        where = f"{self.span}: " if self.span else (f"{self.subject}: " if self.subject else "")
        return f"{where}{self.severity}[{self.rule}] {self.message}"

    def to_json(self) -> dict:
        out = {"severity": self.severity, "rule": self.rule, "message": self.message}
        if self.subject:
            out["subject"] = self.subject
        if self.span is not None:
            out["span"] = str(self.span)
        return out
