"""Diagnostic construction shared by the rule modules."""
from __future__ import annotations

from typing import Optional

from ..catalog import RULES
from ..diagnostics import Diagnostic, FixSuggestion, Severity
from ..spans import Span


def make_diagnostic(
    rule_id: str,
    severity: Severity,
    span: Span,
    message: str,
    fix: Optional[FixSuggestion] = None,
) -> Diagnostic:
    meta = RULES[rule_id]
    return Diagnostic(rule_id, severity, span, message, meta.explanation, fix, meta.doc_link)
