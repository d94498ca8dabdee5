"""Source positions.

Nodes carry character offsets into their host text. `LineIndex` turns
those into `Span` values with UTF-8 byte offsets and 1-based line/column
numbers (columns count characters).
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass


@dataclass(frozen=True, slots=True, order=True)
class Span:
    unit_path: str
    start_byte: int
    end_byte: int
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def to_dict(self) -> dict:
        return {
            "path": self.unit_path,
            "startByte": self.start_byte,
            "endByte": self.end_byte,
            "line": self.start_line,
            "col": self.start_col,
            "endLine": self.end_line,
            "endCol": self.end_col,
        }


class LineIndex:
    """Offset bookkeeping for one file's text."""

    def __init__(self, path: str, text: str) -> None:
        self.path = path
        self.text = text
        starts = [0]
        find = text.find
        pos = find("\n")
        while pos != -1:
            starts.append(pos + 1)
            pos = find("\n", pos + 1)
        self._line_starts = starts
        self._ascii = text.isascii()
        self._byte_prefix: list[int] | None = None

    def byte_offset(self, char_offset: int) -> int:
        if self._ascii:
            return char_offset
        if self._byte_prefix is None:
            prefix = [0] * (len(self.text) + 1)
            total = 0
            for i, ch in enumerate(self.text):
                o = ord(ch)
                total += 1 if o < 0x80 else 2 if o < 0x800 else 3 if o < 0x10000 else 4
                prefix[i + 1] = total
            self._byte_prefix = prefix
        return self._byte_prefix[char_offset]

    def char_offset(self, byte_offset: int) -> int:
        if self._ascii:
            return byte_offset
        self.byte_offset(0)
        prefix = self._byte_prefix
        assert prefix is not None
        i = bisect_right(prefix, byte_offset) - 1
        if prefix[i] != byte_offset:
            raise ValueError(f"byte offset {byte_offset} splits a character")
        return i

    def line_col(self, char_offset: int) -> tuple[int, int]:
        line = bisect_right(self._line_starts, char_offset)
        return line, char_offset - self._line_starts[line - 1] + 1

    def line_start(self, line: int) -> int:
        return self._line_starts[line - 1]

    def line_end(self, line: int) -> int:
        """Offset of the newline ending `line` (or end of text)."""
        if line < len(self._line_starts):
            return self._line_starts[line] - 1
        return len(self.text)

    @property
    def line_count(self) -> int:
        return len(self._line_starts)

    def span(self, start: int, end: int) -> Span:
        sl, sc = self.line_col(start)
        el, ec = self.line_col(end)
        return Span(
            self.path,
            self.byte_offset(start),
            self.byte_offset(end),
            sl,
            sc,
            el,
            ec,
        )
