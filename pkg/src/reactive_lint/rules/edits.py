"""Text helpers shared by the fix builders."""
from __future__ import annotations

from typing import Optional

from ..script.parser import ScriptAst

ANGULAR_CORE = "@angular/core"
RXJS_INTEROP = "@angular/core/rxjs-interop"


def line_start(text: str, offset: int) -> int:
    return text.rfind("\n", 0, offset) + 1


def line_end(text: str, offset: int) -> int:
    end = text.find("\n", offset)
    return len(text) if end == -1 else end


def indent_at(text: str, offset: int) -> str:
    start = line_start(text, offset)
    i = start
    while i < len(text) and text[i] in " \t":
        i += 1
    return text[start:i]


def removal_range(text: str, start: int, end: int) -> tuple[int, int]:
    """Range deleting `[start, end)` plus its lines when nothing else is on them."""
    ls = line_start(text, start)
    le = line_end(text, end)
    if text[ls:start].strip() or text[end:le].strip():
        return start, end
    return ls, min(le + 1, len(text))


def add_named_import(script: ScriptAst, name: str, module: str) -> list[tuple[int, int, str]]:
    """Edits importing `name` from `module`, or nothing when already imported."""
    text = script.index.text
    for imp in script.imports:
        if name in imp.local_names:
            return []
    target = next(
        (imp for imp in script.imports if imp.module == module and imp.brace_close is not None),
        None,
    )
    if target is not None:
        close = target.brace_close
        j = close
        while j > target.brace_open + 1 and text[j - 1].isspace():
            j -= 1
        gap = text[j:close]
        if j == target.brace_open + 1:
            return [(j, close, f" {name} ")]
        last = text[j - 1]
        if "\n" in gap:
            indent = indent_at(text, j - 1)
            if last == ",":
                return [(j, j, f"\n{indent}{name},")]
            return [(j, j, f",\n{indent}{name}")]
        if last == ",":
            return [(j, j, f" {name},")]
        return [(j, j, f", {name}")]
    quote = "'"
    if script.imports:
        first = script.imports[0]
        raw = text[first.start:first.end]
        if '"' in raw and "'" not in raw:
            quote = '"'
    line = f"import {{ {name} }} from {quote}{module}{quote};"
    if script.imports:
        anchor = max(imp.end for imp in script.imports)
        return [(anchor, anchor, "\n" + line)]
    return [(0, 0, line + "\n")]


def strip_dollar(name: str) -> str:
    return name[:-1] if name.endswith("$") and len(name) > 1 else name


def type_text(script: ScriptAst, member) -> Optional[str]:
    ann = getattr(member, "type_annotation", None)
    if ann is None:
        return None
    return script.index.text[ann.start:ann.end]
