"""Structured parse/type diagnostics and their plain-text rendering."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    line: int      # 1-based, into the submitted problem text
    column: int    # 1-based
    offending_text: str  # the source line the diagnostic points at
    message: str         # one-line summary
    detail: tuple[str, ...] = ()        # detailed block, one entry per line
    partial_tree: Optional[str] = None  # rendered parse tree for parse failures
    hints: tuple[str, ...] = ()

    def render(self) -> str:
        """Plain-text form: summary, detail block, parse tree, hints."""
        head = "Input error" if self.severity == "error" else "Warning"
        lines = [
            f"{head} on line {self.line}:   {self.offending_text.strip()}",
            self.message,
        ]
        if self.detail:
            lines.append("")
            lines.extend(self.detail)
        if self.partial_tree is not None:
            lines.append("")
            lines.append("Parse tree as far as the parser was able to get:")
            lines.extend("    " + t for t in self.partial_tree.splitlines())
        if self.hints:
            lines.append("")
            lines.append("It may help to check for " + "; ".join(self.hints) + ".")
        return "\n".join(lines)


def error(line: int, column: int, offending_text: str, message: str, **kw) -> Diagnostic:
    return Diagnostic("error", line, column, offending_text, message, **kw)


def warning(line: int, column: int, offending_text: str, message: str, **kw) -> Diagnostic:
    return Diagnostic("warning", line, column, offending_text, message, **kw)


def has_errors(diags: list[Diagnostic]) -> bool:
    return any(d.severity == "error" for d in diags)
