"""Expected-diagnostic annotations in fixture files.

A line holding only `// expect: <rule-id>` (or `<!-- expect: <rule-id> -->`
in templates) declares a diagnostic starting on the next line that is not
itself an annotation. Several ids may be listed with commas, and stacked
annotation lines all apply to the same following line.
"""
from __future__ import annotations

import re
from collections import Counter
from typing import Iterable

from .diagnostics import Diagnostic

_ANNOTATION = re.compile(r"^\s*(?://|<!--)\s*expect:\s*([^>]*?)\s*(?:-->)?\s*$")


def expectations(text: str) -> Counter:
    """Multiset of (line, rule_id) declared in `text`; lines are 1-based."""
    out: Counter = Counter()
    pending: list[str] = []
    for number, line in enumerate(text.split("\n"), start=1):
        m = _ANNOTATION.match(line)
        if m:
            pending.extend(part.strip() for part in m.group(1).split(",") if part.strip())
            continue
        for rule_id in pending:
            out[(number, rule_id)] += 1
        pending = []
    return out


def observed(diagnostics: Iterable[Diagnostic], path: str) -> Counter:
    return Counter((d.span.start_line, d.rule_id) for d in diagnostics if d.span.unit_path == path)


def compare(expected: Counter, actual: Counter) -> tuple[Counter, Counter]:
    """(missing, unexpected) between two (line, rule_id) multisets."""
    return expected - actual, actual - expected
