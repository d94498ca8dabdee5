from collections import Counter

import pytest

from reactive_lint.pipeline import lint
from reactive_lint.sidecar import compare, expectations, observed
from reactive_lint.workspace import load_project

from conftest import CORPORA, FIXTURES


def test_annotation_applies_to_next_code_line():
    text = "a\n// expect: prefer-signal\nb\n  <!-- expect: internal/parse-error -->\nc\n"
    assert expectations(text) == Counter({(3, "prefer-signal"): 1, (5, "internal/parse-error"): 1})


def test_stacked_and_comma_separated():
    text = "// expect: a, b\n// expect: a\nx\n"
    assert expectations(text) == Counter({(3, "a"): 2, (3, "b"): 1})


def test_trailing_comments_are_not_annotations():
    assert expectations("x = 1; // expect: prefer-signal\n") == Counter()


def test_compare_reports_both_directions():
    missing, extra = compare(Counter({(1, "a"): 2}), Counter({(1, "a"): 1, (2, "b"): 1}))
    assert missing == Counter({(1, "a"): 1}) and extra == Counter({(2, "b"): 1})


RUNS = {}


def corpus_run(name):
    if name not in RUNS:
        RUNS[name] = lint(load_project(FIXTURES / name))
    return RUNS[name]


FILES = [
    (name, str(path.relative_to(FIXTURES / name)))
    for name in CORPORA
    for path in sorted((FIXTURES / name).rglob("*"))
    if path.suffix in (".ts", ".html")
]


@pytest.mark.parametrize("name, rel", FILES, ids=[f"{n}/{r}" for n, r in FILES])
def test_sidecar_recall_and_precision(name, rel):
    run = corpus_run(name)
    unit = next(u for u in run.units if u.path == rel)
    expected = expectations(unit.text)
    actual = observed(run.diagnostics, rel)
    missing, unexpected = compare(expected, actual)
    assert not missing, f"recall below 100%: {sorted(missing.elements())}"
    assert not unexpected, f"precision below 100%: {sorted(unexpected.elements())}"
