from __future__ import annotations

import re
from dataclasses import dataclass

from ..diagnostics import Diagnostic, Span

KEYWORDS = frozenset(
    {
        "type", "player", "param", "entry", "game", "template", "hole", "use", "with",
        "decision", "nature", "fun", "payoff", "branch", "seq", "par", "ret", "where",
        "end", "if", "then", "else", "let", "in", "and", "or", "not", "unit",
    }
)

# longest operators first
_PUNCT = ("->", "..", "==", "!=", "<=", ">=", "(", ")", "{", "}", "[", "]", "<", ">",
          ",", ":", ";", "=", "+", "-", "*", "/", ".", "|")

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+)"
    r"|(?P<comment>--[^\n]*)"
    r"|(?P<float>[0-9]+\.[0-9]+(?:[eE][+-]?[0-9]+)?|[0-9]+[eE][+-]?[0-9]+)"
    r"|(?P<int>[0-9]+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<punct>" + "|".join(re.escape(p) for p in _PUNCT) + ")"
)


@dataclass(frozen=True)
class Token:
    kind: str  # ident, keyword, int, float, punct, eof
    text: str
    span: Span

    def is_(self, text: str) -> bool:
        return self.kind in ("keyword", "punct") and self.text == text


def _advance(line: int, col: int, text: str) -> tuple[int, int]:
    nl = text.count("\n")
    if nl:
        return line + nl, len(text) - text.rfind("\n")
    return line, col + len(text)


def tokenize(source: str) -> tuple[list[Token], list[Diagnostic]]:
    tokens: list[Token] = []
    diags: list[Diagnostic] = []
    pos, line, col = 0, 1, 1
    n = len(source)
    while pos < n:
        m = _TOKEN.match(source, pos)
        if m is None:
            # skip a run of unrecognised characters as one diagnostic
            start = pos
            while pos < n and _TOKEN.match(source, pos) is None:
                pos += 1
            bad = source[start:pos]
            end_line, end_col = _advance(line, col, bad)
            diags.append(
                Diagnostic(
                    "syntax.invalid-character",
                    f"unexpected character {bad[0]!r}",
                    span=Span(line, col, end_line, end_col),
                )
            )
            line, col = end_line, end_col
            continue
        text = m.group()
        kind = m.lastgroup
        end_line, end_col = _advance(line, col, text)
        if kind not in ("ws", "comment"):
            if kind == "ident" and text in KEYWORDS:
                kind = "keyword"
            tokens.append(Token(kind, text, Span(line, col, end_line, end_col)))
        pos = m.end()
        line, col = end_line, end_col
    tokens.append(Token("eof", "", Span(line, col, line, col)))
    return tokens, diags
