"""Diagnostic records shared by every stage."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .spans import LineIndex, Span


class Severity(str, enum.Enum):
    ERROR = "error"
    WARNING = "warning"
    SUGGESTION = "suggestion"

    @property
    def rank(self) -> int:
        return _RANK[self]

    def downgrade(self) -> "Severity":
        if self is Severity.ERROR:
            return Severity.WARNING
        return Severity.SUGGESTION


_RANK = {Severity.SUGGESTION: 0, Severity.WARNING: 1, Severity.ERROR: 2}


@dataclass(frozen=True)
class Edit:
    span: Span
    replacement: str


@dataclass(frozen=True)
class FixSuggestion:
    edits: tuple[Edit, ...]
    before: str
    after: str
    safety: str  # "safe_auto" | "suggestion_only"
    note: str = ""

    @property
    def is_safe(self) -> bool:
        return self.safety == "safe_auto"


@dataclass(frozen=True)
class Diagnostic:
    rule_id: str
    severity: Severity
    span: Span
    message: str
    explanation: str = ""
    fix: Optional[FixSuggestion] = None
    doc_link: str = ""

    def sort_key(self) -> tuple:
        return (
            self.span.unit_path.encode("utf-8"),
            self.span.start_byte,
            self.rule_id,
            self.span.end_byte,
            self.message,
        )


@dataclass
class TextEdits:
    """Collects character-offset edits against one file and renders a fix."""

    index: LineIndex
    edits: list[tuple[int, int, str]] = field(default_factory=list)

    def replace(self, start: int, end: int, text: str) -> "TextEdits":
        self.edits.append((start, end, text))
        return self

    def insert(self, at: int, text: str) -> "TextEdits":
        return self.replace(at, at, text)

    def build(self, safety: str, note: str = "") -> FixSuggestion:
        edits = sorted(self.edits, key=lambda e: (e[0], e[1]))
        for (_, e1, _), (s2, _, _) in zip(edits, edits[1:]):
            if s2 < e1:
                raise ValueError("overlapping edits")
        before, after = render_hunks(self.index, edits)
        return FixSuggestion(
            edits=tuple(
                Edit(self.index.span(s, e), r) for s, e, r in edits
            ),
            before=before,
            after=after,
            safety=safety,
            note=note,
        )


HUNK_SEPARATOR = "\n...\n"


def hunk_ranges(index: LineIndex, edits: list[tuple[int, int, str]]) -> list[tuple[int, int, list]]:
    """Group sorted edits into whole-line regions of the original text."""
    hunks: list[tuple[int, int, list]] = []
    for start, end, repl in edits:
        first = index.line_col(start)[0]
        last = index.line_col(end)[0]
        if end > start and last > first and index.line_start(last) == end:
            # a removal of whole lines stops at the next line's start
            last -= 1
        lo = index.line_start(first)
        hi = index.line_end(last)
        if hunks and lo <= hunks[-1][1] + 1:
            plo, phi, pedits = hunks[-1]
            hunks[-1] = (plo, max(phi, hi), pedits + [(start, end, repl)])
        else:
            hunks.append((lo, hi, [(start, end, repl)]))
    return hunks


def apply_to_region(text: str, lo: int, hi: int, edits: list[tuple[int, int, str]]) -> str:
    out = []
    pos = lo
    for start, end, repl in edits:
        out.append(text[pos:start])
        out.append(repl)
        pos = end
    out.append(text[pos:hi])
    return "".join(out)


def render_hunks(index: LineIndex, edits: list[tuple[int, int, str]]) -> tuple[str, str]:
    text = index.text
    befores, afters = [], []
    for lo, hi, hunk_edits in hunk_ranges(index, edits):
        befores.append(text[lo:hi])
        afters.append(apply_to_region(text, lo, hi, hunk_edits))
    return HUNK_SEPARATOR.join(befores), HUNK_SEPARATOR.join(afters)
