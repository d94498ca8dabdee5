from __future__ import annotations

import shutil
from pathlib import Path

import pytest

from reactive_lint.pipeline import lint
from reactive_lint.script import parse_script
from reactive_lint.semantic import build_models
from reactive_lint.template import parse_template
from reactive_lint.workspace import SourceUnit, load_project, resolve_template

FIXTURES = Path(__file__).parent / "fixtures"
CORPORA = ("case_study_1", "case_study_2", "clean", "rules")


def lint_dir(root, globs=("src/**/*.ts",), **kwargs):
    return lint(load_project(root, globs), **kwargs)


def models_for(source: str, template: str | None = None, path: str = "src/app/x.component.ts"):
    """Models for one script; `template` stands in for every external templateUrl."""
    unit = SourceUnit.from_text(path, source)
    script = parse_script(unit)
    external = {}
    if template is not None:
        html = SourceUnit.from_text(path[:-3] + ".html", template)
        external[html.path] = html
    templates = {}
    for cls in script.classes:
        deco = cls.decorator("Component")
        if deco is None:
            continue
        found, _ = resolve_template(deco, unit, external)
        if found is not None:
            templates[cls.name] = parse_template(found)
    return build_models(script, templates)


def rule_ids(diagnostics):
    return sorted(d.rule_id for d in diagnostics)


@pytest.fixture
def copy_fixture(tmp_path):
    def _copy(name: str) -> Path:
        dest = tmp_path / name
        shutil.copytree(FIXTURES / name, dest)
        return dest

    return _copy
