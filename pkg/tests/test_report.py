import json
import re

import pytest

from reactive_lint.diagnostics import Diagnostic, Severity
from reactive_lint.pipeline import lint
from reactive_lint.report import (
    EXIT_FINDINGS,
    EXIT_OK,
    RunReport,
    exit_status,
    format_json,
    format_text,
    mask_elapsed,
    to_json_obj,
)
from reactive_lint.spans import Span
from reactive_lint.workspace import RuleConfig, load_project

from conftest import FIXTURES

GOLDEN = FIXTURES.parent / "golden"


def report_for(name, elapsed=None):
    config = RuleConfig.defaults()
    report = lint(load_project(FIXTURES / name)).report(config)
    if elapsed is not None:
        report.elapsed_ms = elapsed
    return report


def fake(severity, rule="no-implicit-subscriptions"):
    return Diagnostic(rule, severity, Span("a.ts", 0, 1, 1, 1, 1, 2), "m")


# Independent statement of the table: code 1 exactly when the worst severity
# present is at least as severe as the fail level.
EXIT_TABLE = {
    ("error", "error"): 1, ("error", "warning"): 1, ("error", "suggestion"): 1,
    ("warning", "error"): 0, ("warning", "warning"): 1, ("warning", "suggestion"): 1,
    ("suggestion", "error"): 0, ("suggestion", "warning"): 0, ("suggestion", "suggestion"): 1,
}


@pytest.mark.parametrize("highest, fail_level", sorted(EXIT_TABLE))
def test_exit_code_table(highest, fail_level):
    assert exit_status(Severity(highest), Severity(fail_level)) == EXIT_TABLE[(highest, fail_level)]


@pytest.mark.parametrize("fail_level", ["error", "warning", "suggestion"])
def test_no_findings_exit_zero(fail_level):
    assert exit_status(None, Severity(fail_level)) == EXIT_OK


def test_empty_report_text_and_json():
    report = RunReport("0.1.0", RuleConfig.defaults().summary(), 3, [], 5)
    assert format_text(report) == "0 problems\n"
    data = json.loads(format_json(report))
    assert data == {
        "version": "0.1.0",
        "summary": {"files": 3, "errors": 0, "warnings": 0, "suggestions": 0, "elapsedMs": 5, "byRule": {}},
        "diagnostics": [],
    }


def test_text_line_shape():
    report = RunReport("0.1.0", {}, 1, [fake(Severity.ERROR)], 0)
    lines = format_text(report).splitlines()
    assert lines == ["a.ts:1:1  error  no-implicit-subscriptions  m", "", "1 problem (1 error, 0 warnings, 0 suggestions) in 1 file"]


def test_leak_line_and_snippet():
    text = format_text(report_for("rules"))
    line = next(l for l in text.splitlines() if "namespace-recovery.component.ts:12:" in l)
    assert "  error  no-implicit-subscriptions  " in line
    assert "+     interval(1000).pipe(takeUntilDestroyed()).subscribe(n => console.log(n));" in text


def test_color_only_wraps_severity_and_snippet():
    report = report_for("case_study_1", elapsed=0)
    plain = format_text(report)
    colored = format_text(report, color=True)
    assert "\x1b[" not in plain
    assert "\x1b[31merror\x1b[0m" in colored
    assert re.sub(r"\x1b\[[0-9;]*m", "", colored) == plain


@pytest.mark.parametrize("name", ["case_study_1", "rules"])
def test_text_matches_golden(name):
    assert format_text(report_for(name)) == (GOLDEN / f"{name}.txt").read_text(encoding="utf-8")


def test_json_schema_and_key_order():
    data = json.loads(format_json(report_for("case_study_1")))
    assert list(data) == ["version", "summary", "diagnostics"]
    assert list(data["summary"]) == ["files", "errors", "warnings", "suggestions", "elapsedMs", "byRule"]
    keys = ["ruleId", "severity", "path", "line", "col", "endLine", "endCol", "message", "explanation", "docLink"]
    for d in data["diagnostics"]:
        assert list(d)[:10] == keys
        if "fix" in d:
            assert list(d["fix"]) == ["safety", "before", "after", "edits"]
            for e in d["fix"]["edits"]:
                assert list(e) == ["startByte", "endByte", "replacement"]


def test_json_case_study_two_counts():
    data = json.loads(format_json(report_for("case_study_2")))
    assert data["summary"]["byRule"] == {"prefer-signal": 12, "no-unused-observables": 6}
    assert data["summary"]["suggestions"] == 18


@pytest.mark.parametrize("name", ["case_study_1", "case_study_2", "clean", "rules"])
def test_counts_round_trip(name):
    report = report_for(name)
    data = json.loads(format_json(report))
    by_sev = {s: sum(1 for d in data["diagnostics"] if d["severity"] == s) for s in ("error", "warning", "suggestion")}
    assert (data["summary"]["errors"], data["summary"]["warnings"], data["summary"]["suggestions"]) == (
        by_sev["error"], by_sev["warning"], by_sev["suggestion"],
    )
    by_rule = {}
    for d in data["diagnostics"]:
        by_rule[d["ruleId"]] = by_rule.get(d["ruleId"], 0) + 1
    assert data["summary"]["byRule"] == by_rule
    assert data["summary"]["files"] == report.files_analyzed


def test_repeat_runs_identical_modulo_elapsed():
    a = format_json(report_for("case_study_1"))
    b = format_json(report_for("case_study_1"))
    assert mask_elapsed(a) == mask_elapsed(b)


def test_mask_elapsed_only_touches_elapsed():
    report = report_for("case_study_2", elapsed=1234)
    masked = json.loads(mask_elapsed(format_json(report)))
    original = to_json_obj(report)
    original["summary"]["elapsedMs"] = 0
    assert masked == original


def test_summary_pluralisation():
    diags = [fake(Severity.WARNING), fake(Severity.WARNING)]
    report = RunReport("0.1.0", {}, 2, diags, 0)
    assert format_text(report).splitlines()[-1] == "2 problems (0 errors, 2 warnings, 0 suggestions) in 2 files"
    assert EXIT_FINDINGS == 1
