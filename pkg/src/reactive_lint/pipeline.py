"""End-to-end analysis: discovery, parsing, models, rules."""
from __future__ import annotations

import gc
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Optional

from . import __version__
from .catalog import INTERNAL_PARSE_ERROR
from .diagnostics import Diagnostic, Severity
from .report import RunReport
from .rules import run_rules
from .script import parse_script
from .script.nodes import to_dict
from .semantic import build_models
from .template import parse_template
from .workspace import ProjectConfig, RuleConfig, SourceUnit, discover_sources, resolve_template

RECURSION_LIMIT = 6000


@dataclass
class FileAnalysis:
    path: str
    diagnostics: list[Diagnostic]
    debug: Optional[dict] = None


@dataclass
class LintRun:
    units: list[SourceUnit]
    diagnostics: list[Diagnostic]
    elapsed_ms: int
    debug: list[dict] = field(default_factory=list)

    @property
    def texts(self) -> dict[str, str]:
        return {u.path: u.text for u in self.units}

    def report(self, config: RuleConfig) -> RunReport:
        return RunReport(__version__, config.summary(), len(self.units), self.diagnostics, self.elapsed_ms)


def _component_templates(script, unit: SourceUnit, templates: Mapping[str, SourceUnit], diags: list):
    parsed = {}
    for cls in script.classes:
        deco = cls.decorator("Component")
        if deco is None:
            continue
        template_unit, missing = resolve_template(deco, unit, templates)
        if missing is not None:
            diags.append(missing)
        if template_unit is None:
            continue
        ast = parse_template(template_unit)
        diags.extend(ast.parse_errors)
        parsed[cls.name] = ast
    return parsed


def analyze_script(
    unit: SourceUnit,
    templates: Mapping[str, SourceUnit],
    config: RuleConfig,
    debug: bool = False,
) -> FileAnalysis:
    """All diagnostics whose analysis starts from one script file."""
    try:
        script = parse_script(unit)
        diags: list[Diagnostic] = list(script.parse_errors)
        parsed = _component_templates(script, unit, templates, diags)
        models = build_models(script, parsed)
        diags.extend(run_rules(models, config))
    except RecursionError:
        span = unit.line_index().span(0, 0)
        message = "File is nested too deeply to analyze."
        return FileAnalysis(unit.path, [Diagnostic(INTERNAL_PARSE_ERROR, Severity.ERROR, span, message)])
    info = None
    if debug:
        info = {
            "path": unit.path,
            "script": {
                "imports": to_dict(script.imports),
                "classes": to_dict(script.classes),
                "parseErrors": len(script.parse_errors),
            },
            "templates": {
                name: {"nodes": to_dict(ast.nodes), "notes": list(ast.notes)}
                for name, ast in sorted(parsed.items())
            },
            "models": [m.to_dict() for m in models],
        }
    return FileAnalysis(unit.path, diags, info)


# worker-process state, set once per process by the pool initializer
_WORKER: dict = {}


def _init_worker(templates: Mapping[str, SourceUnit], project: ProjectConfig, debug: bool) -> None:
    gc.disable()
    sys.setrecursionlimit(max(sys.getrecursionlimit(), RECURSION_LIMIT))
    _WORKER.update(templates=templates, project=project, debug=debug)


def _work(unit: SourceUnit) -> FileAnalysis:
    project: ProjectConfig = _WORKER["project"]
    return analyze_script(unit, _WORKER["templates"], project.rules_for(unit.path), _WORKER["debug"])


def default_jobs() -> int:
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:
        return os.cpu_count() or 1


def lint(
    project: ProjectConfig,
    jobs: int = 1,
    debug: bool = False,
    shuffle_seed: Optional[int] = None,
) -> LintRun:
    """Analyze every discovered file of `project`.

    `shuffle_seed` permutes the discovery order before analysis; the output
    is sorted canonically so it must not change the result.
    """
    started = time.perf_counter()
    diagnostics: list[Diagnostic] = []
    units = discover_sources(project, diagnostics)
    work = list(units)
    if shuffle_seed is not None:
        random.Random(shuffle_seed).shuffle(work)
    templates = {u.path: u for u in work if u.kind == "template"}
    scripts = [u for u in work if u.kind == "script"]

    gc_was_enabled = gc.isenabled()
    old_limit = sys.getrecursionlimit()
    gc.disable()
    sys.setrecursionlimit(max(old_limit, RECURSION_LIMIT))
    try:
        if jobs > 1 and len(scripts) > 1:
            chunk = max(1, len(scripts) // (jobs * 4))
            with ProcessPoolExecutor(
                max_workers=jobs, initializer=_init_worker, initargs=(templates, project, debug)
            ) as pool:
                results = list(pool.map(_work, scripts, chunksize=chunk))
        else:
            results = [
                analyze_script(u, templates, project.rules_for(u.path), debug) for u in scripts
            ]
    finally:
        sys.setrecursionlimit(old_limit)
        if gc_was_enabled:
            gc.enable()

    for r in results:
        diagnostics.extend(r.diagnostics)
    # a template shared by several components reports its parse errors once
    unique = {(d.sort_key(), d.severity): d for d in diagnostics}
    ordered = sorted(unique.values(), key=Diagnostic.sort_key)
    debug_info = sorted(
        (r.debug for r in results if r.debug is not None), key=lambda d: d["path"].encode("utf-8")
    )
    elapsed = int(round((time.perf_counter() - started) * 1000))
    return LintRun(units, ordered, elapsed, debug_info)
