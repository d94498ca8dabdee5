"""Applying safe fixes to files on disk."""
from __future__ import annotations

import hashlib
import os
import shutil
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional

from .catalog import INTERNAL_FIX_SKIPPED
from .diagnostics import Diagnostic, Severity
from .script.parser import parse_script
from .spans import Span
from .workspace import SourceUnit

SAFE_ONLY = "safe_only"

ByteEdit = tuple[int, int, str]


@dataclass
class FixResult:
    texts: dict[str, str] = field(default_factory=dict)  # changed files only
    applied: int = 0
    dropped: int = 0
    skipped: list[Diagnostic] = field(default_factory=list)
    accepted: dict[str, int] = field(default_factory=dict)  # chosen fixes per file


def text_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _overlaps(a: ByteEdit, b: ByteEdit) -> bool:
    (s1, e1, _), (s2, e2, _) = a, b
    if s1 == e1 and s2 == e2:
        return s1 == s2
    if s1 == e1:
        return s2 < s1 < e2
    if s2 == e2:
        return s1 < s2 < e1
    return s1 < e2 and s2 < e1


def _skip(path: str, message: str) -> Diagnostic:
    return Diagnostic(INTERNAL_FIX_SKIPPED, Severity.WARNING, Span(path, 0, 0, 1, 1, 1, 1), message)


def select_edits(diagnostics: Iterable[Diagnostic]) -> tuple[dict[str, list[ByteEdit]], dict[str, int], int]:
    """Non-conflicting safe edits per file, earlier diagnostics winning.

    Returns (edits per path, accepted fixes per path, fixes dropped). An edit
    equal to one already accepted is shared rather than treated as a conflict.
    """
    chosen: dict[str, list[ByteEdit]] = {}
    accepted: dict[str, int] = {}
    dropped = 0
    for diag in sorted(diagnostics, key=Diagnostic.sort_key):
        fix = diag.fix
        if fix is None or not fix.is_safe or not fix.edits:
            continue
        path = diag.span.unit_path
        current = chosen.setdefault(path, [])
        new = [(e.span.start_byte, e.span.end_byte, e.replacement) for e in fix.edits]
        fresh = [e for e in new if e not in current]
        if any(_overlaps(e, c) for e in fresh for c in current):
            dropped += 1
            continue
        current.extend(fresh)
        accepted[path] = accepted.get(path, 0) + 1
    return {p: e for p, e in chosen.items() if e}, accepted, dropped


def apply_edits(text: str, edits: list[ByteEdit]) -> str:
    """Apply byte-offset edits, last first, so earlier offsets stay valid."""
    data = text.encode("utf-8")
    for start, end, repl in sorted(edits, key=lambda e: (e[0], e[1]), reverse=True):
        data = data[:start] + repl.encode("utf-8") + data[end:]
    return data.decode("utf-8")


def _parse_error_count(path: str, text: str) -> int:
    return len(parse_script(SourceUnit.from_text(path, text)).parse_errors)


def plan_fixes(texts: Mapping[str, str], diagnostics: Iterable[Diagnostic], mode: str = SAFE_ONLY) -> FixResult:
    """New file texts after applying safe fixes; touches nothing on disk."""
    if mode != SAFE_ONLY:
        raise ValueError(f"unsupported fix mode '{mode}'")
    per_file, accepted, dropped = select_edits(diagnostics)
    result = FixResult(dropped=dropped)
    for path in sorted(per_file, key=lambda p: p.encode("utf-8")):
        old = texts.get(path)
        if old is None:
            result.skipped.append(_skip(path, "Fix skipped: the file is not part of this run."))
            continue
        new = apply_edits(old, per_file[path])
        if new == old:
            continue
        if path.endswith(".ts") and _parse_error_count(path, new) > _parse_error_count(path, old):
            result.skipped.append(_skip(path, "Fixes skipped: the rewritten file would not parse cleanly."))
            continue
        result.texts[path] = new
    result.applied = sum(n for p, n in accepted.items() if p in result.texts)
    result.accepted = accepted
    return result


def write_atomic(path: Path, text: str) -> None:
    directory = path.parent
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(text.encode("utf-8"))
        try:
            shutil.copymode(path, tmp)
        except OSError:
            pass
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def apply_fixes(
    root: Path,
    texts: Mapping[str, str],
    diagnostics: list[Diagnostic],
    mode: str = SAFE_ONLY,
    hashes: Optional[Mapping[str, str]] = None,
) -> FixResult:
    """Rewrite files under `root` with their safe fixes.

    `texts` holds the text each diagnostic was computed against. A file whose
    on-disk content no longer hashes to that text is left alone and reported.
    """
    result = plan_fixes(texts, diagnostics, mode)
    expected = dict(hashes) if hashes is not None else {p: text_hash(t) for p, t in texts.items()}
    for path in list(result.texts):
        full = root / path
        try:
            on_disk = full.read_bytes()
        except OSError as exc:
            result.skipped.append(_skip(path, f"Fix skipped: cannot read file ({exc.strerror})."))
            del result.texts[path]
            continue
        if hashlib.sha256(on_disk).hexdigest() != expected.get(path):
            result.skipped.append(_skip(path, "Fix skipped: the file changed since it was analyzed."))
            del result.texts[path]
            continue
        write_atomic(full, result.texts[path])
    result.applied = sum(n for p, n in result.accepted.items() if p in result.texts)
    return result
