"""Human and machine renderings of a lint run, and the exit-code policy."""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional

from .catalog import RULE_IDS
from .diagnostics import HUNK_SEPARATOR, Diagnostic, Severity

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_USAGE = 2

_ANSI = {
    Severity.ERROR: "\x1b[31m",
    Severity.WARNING: "\x1b[33m",
    Severity.SUGGESTION: "\x1b[36m",
}
_DIM = "\x1b[2m"
_RESET = "\x1b[0m"


@dataclass
class RunReport:
    tool_version: str
    config_used: dict
    files_analyzed: int
    diagnostics: list[Diagnostic]
    elapsed_ms: int = 0

    @property
    def severity_counts(self) -> Counter:
        return Counter(d.severity for d in self.diagnostics)

    @property
    def rule_counts(self) -> dict[str, int]:
        counts = Counter(d.rule_id for d in self.diagnostics)
        ordered = [r for r in RULE_IDS if r in counts]
        ordered += sorted(r for r in counts if r not in RULE_IDS)
        return {r: counts[r] for r in ordered}

    @property
    def highest_severity(self) -> Optional[Severity]:
        return max((d.severity for d in self.diagnostics), key=lambda s: s.rank, default=None)


def exit_status(highest: Optional[Severity], fail_level: Severity) -> int:
    """1 when the worst finding reaches `fail_level`, else 0."""
    if highest is not None and highest.rank >= fail_level.rank:
        return EXIT_FINDINGS
    return EXIT_OK


def report_exit_status(report: RunReport, fail_level: Severity) -> int:
    return exit_status(report.highest_severity, fail_level)


# -- json ---------------------------------------------------------------------


def diagnostic_to_json(d: Diagnostic) -> dict:
    out = {
        "ruleId": d.rule_id,
        "severity": d.severity.value,
        "path": d.span.unit_path,
        "line": d.span.start_line,
        "col": d.span.start_col,
        "endLine": d.span.end_line,
        "endCol": d.span.end_col,
        "message": d.message,
        "explanation": d.explanation,
        "docLink": d.doc_link,
    }
    if d.fix is not None:
        out["fix"] = {
            "safety": d.fix.safety,
            "before": d.fix.before,
            "after": d.fix.after,
            "edits": [
                {
                    "startByte": e.span.start_byte,
                    "endByte": e.span.end_byte,
                    "replacement": e.replacement,
                }
                for e in d.fix.edits
            ],
        }
    return out


def to_json_obj(report: RunReport) -> dict:
    sev = report.severity_counts
    return {
        "version": report.tool_version,
        "summary": {
            "files": report.files_analyzed,
            "errors": sev.get(Severity.ERROR, 0),
            "warnings": sev.get(Severity.WARNING, 0),
            "suggestions": sev.get(Severity.SUGGESTION, 0),
            "elapsedMs": report.elapsed_ms,
            "byRule": report.rule_counts,
        },
        "diagnostics": [diagnostic_to_json(d) for d in report.diagnostics],
    }


def format_json(report: RunReport) -> str:
    return json.dumps(to_json_obj(report), indent=2, ensure_ascii=False) + "\n"


def mask_elapsed(document: str) -> str:
    """The JSON document with elapsedMs zeroed, for determinism comparisons."""
    data = json.loads(document)
    data["summary"]["elapsedMs"] = 0
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


# -- text ---------------------------------------------------------------------


def _common_indent(lines: Iterable[str]) -> int:
    widths = [len(line) - len(line.lstrip(" \t")) for line in lines if line.strip()]
    return min(widths, default=0)


def _hunk_lines(before: list[str], after: list[str]) -> list[tuple[str, str]]:
    """(mark, line) pairs: unchanged leading/trailing lines become context."""
    head = 0
    while head < min(len(before), len(after)) and before[head] == after[head]:
        head += 1
    tail = 0
    while (
        tail < min(len(before), len(after)) - head
        and before[len(before) - 1 - tail] == after[len(after) - 1 - tail]
    ):
        tail += 1
    out = [(" ", line) for line in before[:head]]
    out += [("-", line) for line in before[head:len(before) - tail]]
    out += [("+", line) for line in after[head:len(after) - tail]]
    out += [(" ", line) for line in before[len(before) - tail:]]
    return out


def _snippet(d: Diagnostic, color: bool) -> list[str]:
    fix = d.fix
    befores = fix.before.split(HUNK_SEPARATOR)
    afters = fix.after.split(HUNK_SEPARATOR)
    if len(befores) != len(afters):
        befores, afters = [fix.before], [fix.after]
    # an empty hunk text means every line of the region was removed
    hunks = [
        _hunk_lines(b.split("\n") if b else [], a.split("\n") if a else [])
        for b, a in zip(befores, afters)
    ]
    cut = _common_indent(line for hunk in hunks for _, line in hunk)
    label = "fix" if fix.is_safe else "suggested fix"
    out = [f"    {label}:" + (f" {fix.note}" if fix.note else "")]
    for i, hunk in enumerate(hunks):
        if i:
            out.append("      ...")
        out.extend(f"      {mark} {line[cut:]}".rstrip() for mark, line in hunk)
    if color:
        out = [_DIM + line + _RESET for line in out]
    return out


def _plural(n: int, word: str) -> str:
    return f"{n} {word}" if n == 1 else f"{n} {word}s"


def summary_line(report: RunReport) -> str:
    total = len(report.diagnostics)
    if total == 0:
        return "0 problems"
    sev = report.severity_counts
    return (
        f"{_plural(total, 'problem')} ("
        f"{_plural(sev.get(Severity.ERROR, 0), 'error')}, "
        f"{_plural(sev.get(Severity.WARNING, 0), 'warning')}, "
        f"{_plural(sev.get(Severity.SUGGESTION, 0), 'suggestion')}) "
        f"in {_plural(report.files_analyzed, 'file')}"
    )


def format_text(report: RunReport, color: bool = False) -> str:
    lines: list[str] = []
    for d in report.diagnostics:
        sev = d.severity.value
        if color:
            sev = _ANSI[d.severity] + sev + _RESET
        s = d.span
        lines.append(f"{s.unit_path}:{s.start_line}:{s.start_col}  {sev}  {d.rule_id}  {d.message}")
        if d.fix is not None:
            lines.extend(_snippet(d, color))
    if report.diagnostics:
        lines.append("")
    lines.append(summary_line(report))
    return "\n".join(lines) + "\n"
