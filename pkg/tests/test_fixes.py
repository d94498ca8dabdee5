import os
import stat

from hypothesis import given, strategies as st

from reactive_lint.diagnostics import Diagnostic, Severity, TextEdits
from reactive_lint.fixes import apply_edits, apply_fixes, plan_fixes, select_edits, text_hash
from reactive_lint.pipeline import lint
from reactive_lint.spans import LineIndex
from reactive_lint.workspace import load_project

SRC = "const a = 1;\nconst b = 2;\nconst c = 3;\n"


def diag(path, text, edits, safety="safe_auto", rule="no-unused-observables", at=None):
    index = LineIndex(path, text)
    builder = TextEdits(index)
    for start, end, repl in edits:
        builder.replace(start, end, repl)
    start = at if at is not None else min(e[0] for e in edits)
    return Diagnostic(rule, Severity.SUGGESTION, index.span(start, start), "m", fix=builder.build(safety))


def test_edits_apply_back_to_front():
    assert apply_edits("abcdef", [(0, 1, "X"), (2, 4, ""), (6, 6, "!")]) == "Xbef!"


def test_multibyte_offsets_are_bytes():
    text = "é = 1; x = 2;"
    start = len("é = 1; ".encode())
    assert apply_edits(text, [(start, start + 1, "y")]) == "é = 1; y = 2;"


def test_overlap_keeps_earlier_diagnostic():
    first = diag("a.ts", SRC, [(0, 12, "")])
    second = diag("a.ts", SRC, [(6, 7, "z")])
    third = diag("a.ts", SRC, [(13, 25, "")])
    per_file, accepted, dropped = select_edits([third, second, first])
    assert dropped == 1
    assert accepted == {"a.ts": 2}
    assert sorted(per_file["a.ts"]) == [(0, 12, ""), (13, 25, "")]


def test_identical_edits_are_shared():
    a = diag("a.ts", SRC, [(0, 0, "import x;\n"), (6, 7, "A")], at=6)
    b = diag("a.ts", SRC, [(0, 0, "import x;\n"), (19, 20, "B")], at=19)
    result = plan_fixes({"a.ts": SRC}, [a, b])
    assert result.dropped == 0 and result.applied == 2
    assert result.texts["a.ts"] == "import x;\nconst A = 1;\nconst B = 2;\nconst c = 3;\n"


def test_inserts_at_same_point_conflict():
    a = diag("a.ts", SRC, [(0, 0, "x")], at=0)
    b = diag("a.ts", SRC, [(0, 0, "y")], at=1)
    assert select_edits([a, b])[2] == 1


def test_insert_at_boundary_of_replacement_is_allowed():
    a = diag("a.ts", SRC, [(0, 5, "let")], at=0)
    b = diag("a.ts", SRC, [(5, 5, "!")], at=5)
    assert select_edits([a, b])[2] == 0


def test_suggestions_are_never_applied():
    d = diag("a.ts", SRC, [(0, 12, "")], safety="suggestion_only")
    result = plan_fixes({"a.ts": SRC}, [d])
    assert result.texts == {} and result.applied == 0


def test_no_safe_fixes_is_a_no_op(tmp_path):
    (tmp_path / "a.ts").write_text(SRC)
    result = apply_fixes(tmp_path, {"a.ts": SRC}, [])
    assert result.applied == 0 and result.texts == {}
    assert (tmp_path / "a.ts").read_text() == SRC


def test_fix_that_breaks_parsing_is_skipped():
    text = "class A {\n  x = 1;\n}\n"
    brace = text.rindex("}")
    d = diag("a.ts", text, [(brace, brace + 1, "")])
    result = plan_fixes({"a.ts": text}, [d])
    assert result.texts == {}
    assert [s.rule_id for s in result.skipped] == ["internal/fix-skipped"]


def test_stale_file_is_skipped(tmp_path):
    (tmp_path / "a.ts").write_text(SRC + "// edited\n")
    d = diag("a.ts", SRC, [(0, 12, "")])
    result = apply_fixes(tmp_path, {"a.ts": SRC}, [d])
    assert result.applied == 0
    assert [(s.rule_id, s.severity) for s in result.skipped] == [("internal/fix-skipped", Severity.WARNING)]
    assert (tmp_path / "a.ts").read_text() == SRC + "// edited\n"


def test_rewrite_is_atomic_and_keeps_mode(tmp_path):
    path = tmp_path / "a.ts"
    path.write_text(SRC)
    path.chmod(0o640)
    d = diag("a.ts", SRC, [(0, 13, "")])
    result = apply_fixes(tmp_path, {"a.ts": SRC}, [d], hashes={"a.ts": text_hash(SRC)})
    assert result.applied == 1
    assert path.read_text() == "const b = 2;\nconst c = 3;\n"
    assert stat.S_IMODE(os.stat(path).st_mode) == 0o640
    assert sorted(p.name for p in tmp_path.iterdir()) == ["a.ts"]


def test_onpush_fix_on_disk(tmp_path):
    src = tmp_path / "src"
    src.mkdir()
    (src / "a.component.ts").write_text(
        "import { Component } from '@angular/core';\n\n"
        "@Component({\n  selector: 'app-a',\n  template: `{{ v$ | async }}`\n})\n"
        "export class AComponent {\n  v$ = of(1);\n}\n"
    )
    project = load_project(tmp_path)
    first = lint(project)
    result = apply_fixes(tmp_path, first.texts, first.diagnostics)
    assert result.applied == 1
    text = (src / "a.component.ts").read_text()
    assert "  template: `{{ v$ | async }}`,\n  changeDetection: ChangeDetectionStrategy.OnPush\n})" in text
    assert "import { Component, ChangeDetectionStrategy } from '@angular/core';" in text
    assert [d.rule_id for d in lint(project).diagnostics] == []


INTERVALS = st.tuples(st.integers(0, 40), st.integers(0, 8), st.sampled_from(["", "x", "yy"]))


@given(st.lists(st.lists(INTERVALS, min_size=1, max_size=3), max_size=6))
def test_selected_edits_never_overlap(groups):
    text = "abcdefghij" * 5
    diags = []
    for n, group in enumerate(groups):
        edits = sorted({(s, min(s + w, len(text)), r) for s, w, r in group})
        if any(a[1] > b[0] or (a[0] == a[1] == b[0] == b[1]) for a, b in zip(edits, edits[1:])):
            continue
        diags.append(diag("t.ts", text, edits, at=n))
    per_file, accepted, dropped = select_edits(diags)
    chosen = sorted(set(per_file.get("t.ts", [])))
    for i, a in enumerate(chosen):
        for b in chosen[i + 1:]:
            if a[0] == a[1] and b[0] == b[1]:
                assert a[0] != b[0]
            elif a[0] == a[1]:
                assert not (b[0] < a[0] < b[1])
            elif b[0] == b[1]:
                assert not (a[0] < b[0] < a[1])
            else:
                assert a[1] <= b[0] or b[1] <= a[0]
    assert sum(accepted.values()) + dropped == len(diags)
