import random
from dataclasses import replace

import pytest

from reactive_lint.catalog import RULE_IDS, RULES
from reactive_lint.diagnostics import HUNK_SEPARATOR, Severity
from reactive_lint.fixes import apply_edits
from reactive_lint.pipeline import _component_templates, lint
from reactive_lint.report import diagnostic_to_json
from reactive_lint.rules import run_rules
from reactive_lint.script import parse_script
from reactive_lint.semantic import build_models
from reactive_lint.workspace import RuleConfig, discover_sources, load_project

from conftest import CORPORA, FIXTURES, models_for, rule_ids


def run(src, template=None, config=None):
    return run_rules(models_for(src, template), config)


def component(body, meta="template: ''", imports=""):
    return f"{imports}@Component({{ {meta} }})\nexport class A {{\n{body}\n}}\n"


# -- no-implicit-subscriptions -------------------------------------------------


def test_bare_subscribe_is_an_error_with_suggested_fix():
    src = component("  constructor() {\n    interval(1000).subscribe(n => console.log(n));\n  }")
    (d,) = run(src)
    assert (d.rule_id, d.severity) == ("no-implicit-subscriptions", Severity.ERROR)
    assert d.fix.safety == "suggestion_only"
    assert "injection context" in d.fix.note
    assert "interval(1000).pipe(takeUntilDestroyed()).subscribe" in d.fix.after
    assert "import { takeUntilDestroyed } from '@angular/core/rxjs-interop';" in d.fix.after


def test_operator_is_appended_to_existing_pipe():
    src = component("  data$ = interval(1);\n  ngOnInit() {\n    this.data$.pipe(map(x => x)).subscribe();\n  }")
    (d,) = run(src)
    assert "this.data$.pipe(map(x => x), takeUntilDestroyed()).subscribe();" in d.fix.after


def test_method_site_uses_injected_destroy_ref():
    src = component(
        "  private destroyRef = inject(DestroyRef);\n  data$ = interval(1);\n"
        "  start() {\n    this.data$.subscribe();\n  }"
    )
    (d,) = run(src)
    assert "this.data$.pipe(takeUntilDestroyed(this.destroyRef)).subscribe();" in d.fix.after


def test_all_covered_is_clean():
    src = component(
        "  data$ = interval(1);\n  constructor() {\n    this.data$.pipe(takeUntilDestroyed()).subscribe();\n"
        "    this.data$.pipe(take(1)).subscribe();\n  }"
    )
    assert run(src) == []


def test_unresolved_base_downgrades_to_warning():
    src = "@Component({ template: '' })\nclass A extends Remote {\n  m() { interval(1).subscribe(); }\n}\n"
    (d,) = run(src)
    assert d.severity is Severity.WARNING and "Remote" in d.message


def test_configured_severity_is_downgraded_for_unknown_status():
    config = RuleConfig.defaults().with_rule_values({"no-implicit-subscriptions": "warning"})
    src = "@Component({ template: '' })\nclass A extends Remote {\n  m() { interval(1).subscribe(); }\n}\n"
    assert [d.severity for d in run(src, config=config)] == [Severity.SUGGESTION]


def test_non_stream_receivers_are_skipped():
    src = component("  @Output() changed = new EventEmitter<number>();\n  m() { this.changed.subscribe(v => console.log(v)); }")
    assert run(src) == []


# -- no-async-without-onpush ---------------------------------------------------


def test_default_strategy_with_async_pipe():
    src = "import { Component } from '@angular/core';\n@Component({ selector: 'a', template: `{{ value$ | async }} {{ value$ | async }}` })\nexport class A { value$ = of(1); }\n"
    (d,) = run(src)
    assert d.rule_id == "no-async-without-onpush" and d.severity is Severity.WARNING
    assert d.span.start_line == 2 and d.span.start_col == 1
    assert "2 async pipe usages" in d.message
    assert d.fix.safety == "safe_auto"
    fixed = apply_edits(src, [(e.span.start_byte, e.span.end_byte, e.replacement) for e in d.fix.edits])
    assert "changeDetection: ChangeDetectionStrategy.OnPush" in fixed
    assert "import { Component, ChangeDetectionStrategy } from '@angular/core';" in fixed
    assert run(fixed) == []


def test_onpush_with_async_is_clean():
    src = component("  v$ = of(1);", "template: '{{ v$ | async }}', changeDetection: ChangeDetectionStrategy.OnPush")
    assert run(src) == []


def test_async_in_event_binding_is_not_a_render_path():
    src = component("  v$ = of(1);\n  go(x) {}", "template: '<b (click)=\"go(v$ | async)\"></b>'")
    assert run(src) == []


def test_explicit_default_value_is_replaced():
    src = component("  v$ = of(1);", "template: '{{ v$ | async }}',\n  changeDetection: ChangeDetectionStrategy.Default")
    (d,) = run(src)
    fixed = apply_edits(src, [(e.span.start_byte, e.span.end_byte, e.replacement) for e in d.fix.edits])
    assert "ChangeDetectionStrategy.Default" not in fixed.split("export class")[0].split("changeDetection:")[1]
    assert run(fixed) == []


def test_ten_case_study_components():
    run_ = lint(load_project(FIXTURES / "case_study_1"))
    onpush = [d for d in run_.diagnostics if d.rule_id == "no-async-without-onpush"]
    assert len(onpush) == 10
    assert len({d.span.unit_path for d in onpush}) == 10


# -- prefer-signal ---------------------------------------------------------------


def test_simple_map_over_subject():
    src = component("  price$ = new BehaviorSubject(1);\n  total$ = this.price$.pipe(map(p => p * 2));\n  m() { return [this.total$]; }")
    (d,) = run(src)
    assert (d.rule_id, d.severity, d.fix.safety) == ("prefer-signal", Severity.SUGGESTION, "suggestion_only")
    assert "computed(" in d.fix.after and "this.price()" in d.fix.after


def test_async_operator_is_excluded():
    src = component("  q$ = new BehaviorSubject('');\n  r$ = this.q$.pipe(switchMap(q => this.api.find(q)));\n  m() { return this.r$; }")
    assert run(src) == []


def test_combine_latest_source():
    src = component(
        "  a$ = new BehaviorSubject(1);\n  b$ = new BehaviorSubject(2);\n"
        "  sum$ = combineLatest([this.a$, this.b$]).pipe(map(([a, b]) => a + b), distinctUntilChanged());\n"
        "  m() { return this.sum$; }"
    )
    (d,) = run(src)
    assert d.rule_id == "prefer-signal"


def test_external_source_is_not_local_state():
    src = component("  r$ = this.http.get('/x').pipe(map(x => x));\n  m() { return this.r$; }")
    assert run(src) == []


# -- no-unused-observables -------------------------------------------------------


def test_dead_subject_is_deleted():
    src = component("  dead$ = new Subject<void>();\n  live = 1;")
    (d,) = run(src)
    assert d.rule_id == "no-unused-observables" and d.fix.safety == "safe_auto"
    fixed = apply_edits(src, [(e.span.start_byte, e.span.end_byte, e.replacement) for e in d.fix.edits])
    assert "dead$" not in fixed and "  live = 1;" in fixed


def test_field_read_in_template_is_used():
    src = component("  shown$ = of(1);", "template: '{{ shown$ | async }}', changeDetection: ChangeDetectionStrategy.OnPush")
    assert run(src) == []


def test_call_with_arguments_is_suggestion_only():
    src = component("  stale$ = this.http.get('/x');")
    (d,) = run(src)
    assert d.fix.safety == "suggestion_only"


@pytest.mark.parametrize(
    "body",
    [
        "  a$ = of(1);\n  m() { this.a$.subscribe(); }",
        "  a$ = of(1);\n  b = toSignal(this.a$);",
        "  @Input() a$ = of(1);",
        "  a$ = of(1);\n  b$ = this.a$.pipe(map(x => x));\n  m() { return this.b$; }",
    ],
)
def test_used_in_other_ways(body):
    assert "no-unused-observables" not in rule_ids(run(component(body)))


# -- use-takeuntildestroyed ------------------------------------------------------


def test_legacy_subject_gives_site_and_declaration():
    src = (FIXTURES / "rules/src/app/legacy-subject.component.ts").read_text()
    diags = run(src)
    assert rule_ids(diags) == ["use-takeuntildestroyed"] * 2
    site = max(diags, key=lambda d: d.span.start_byte)
    assert "takeUntilDestroyed" in site.fix.after and "takeUntil(this.destroy$)" in site.fix.before
    assert all(d.fix is None or d.fix.safety == "suggestion_only" for d in diags)


def test_modern_pattern_is_clean():
    src = component("  constructor() { interval(1).pipe(takeUntilDestroyed()).subscribe(); }")
    assert run(src) == []


def test_stored_subscription_gives_one_site_diagnostic():
    src = (FIXTURES / "rules/src/app/stored-subscription.component.ts").read_text()
    (d,) = run(src)
    assert d.rule_id == "use-takeuntildestroyed"
    assert "this.sub?.unsubscribe();" in d.fix.before


def test_subject_also_used_elsewhere_keeps_declaration():
    src = component(
        "  destroy$ = new Subject<void>();\n"
        "  ngOnInit() { interval(1).pipe(takeUntil(this.destroy$)).subscribe(); }\n"
        "  reset() { this.destroy$.next(); }\n"
        "  ngOnDestroy() { this.destroy$.next(); this.destroy$.complete(); }"
    )
    assert rule_ids(run(src)) == ["use-takeuntildestroyed"]


# -- no-imperative-in-reactive ---------------------------------------------------


def test_assignment_in_callback():
    src = component("  value = 0;\n  constructor() {\n    this.s$.pipe(takeUntilDestroyed()).subscribe(v => this.value = v);\n  }\n  s$ = of(1);")
    (d,) = run(src)
    assert (d.rule_id, d.severity) == ("no-imperative-in-reactive", Severity.WARNING)
    assert "this.value.set(v)" in d.fix.after
    assert "value = signal(0);" in d.fix.after


def test_set_call_is_not_an_assignment():
    src = component("  sig = signal(0);\n  s$ = of(1);\n  constructor() { this.s$.pipe(takeUntilDestroyed()).subscribe(v => this.sig.set(v)); }")
    assert run(src) == []


def test_compound_assignment_becomes_update():
    src = component("  total = 0;\n  s$ = of(1);\n  constructor() { this.s$.pipe(takeUntilDestroyed()).subscribe(v => { this.total += v; }); }")
    (d,) = run(src)
    assert "this.total.update(prev => prev + v)" in d.fix.after


def test_bounded_site_assignments_are_not_reported():
    src = component("  name = '';\n  constructor() { this.http.get('/n').pipe(take(1)).subscribe(n => this.name = n); }")
    assert run(src) == []


# -- engine ----------------------------------------------------------------------


def test_empty_model_list():
    assert run_rules([]) == []


def test_other_classes_get_no_rule_diagnostics():
    src = "export class Service {\n  dead$ = new Subject();\n  constructor() { interval(1).subscribe(v => this.x = v); }\n}\n"
    assert run(src) == []


def test_every_rule_has_metadata():
    assert list(RULES) == list(RULE_IDS)
    for meta in RULES.values():
        assert meta.doc_link.startswith("https://")
        assert meta.explanation


def _serialize(diags):
    return [diagnostic_to_json(d) for d in diags]


@pytest.mark.parametrize("name", CORPORA)
def test_model_order_does_not_matter(name):
    project = load_project(FIXTURES / name)
    units = discover_sources(project)
    templates = {u.path: u for u in units if u.kind == "template"}
    models = []
    for unit in units:
        if unit.kind != "script":
            continue
        script = parse_script(unit)
        models.extend(build_models(script, _component_templates(script, unit, templates, [])))
    baseline = _serialize(run_rules(models))
    for seed in range(5):
        shuffled = list(models)
        random.Random(seed).shuffle(shuffled)
        assert _serialize(run_rules(shuffled)) == baseline


@pytest.mark.parametrize("rule", RULE_IDS)
def test_disabling_a_rule_removes_only_its_diagnostics(rule):
    config = RuleConfig.defaults().with_rule_values({rule: "off"})
    for name in CORPORA:
        project = load_project(FIXTURES / name)
        full = lint(project).diagnostics
        reduced = lint(replace(project, rule_config=config)).diagnostics
        assert _serialize(reduced) == _serialize([d for d in full if d.rule_id != rule])


@pytest.mark.parametrize("name", CORPORA)
def test_fix_snippets_agree_with_edits(name):
    run_ = lint(load_project(FIXTURES / name))
    texts = run_.texts
    for d in run_.diagnostics:
        if d.fix is None or not d.fix.edits:
            continue
        edits = [(e.span.start_byte, e.span.end_byte, e.replacement) for e in d.fix.edits]
        starts = [e[0] for e in edits]
        assert starts == sorted(starts)
        assert all(a[1] <= b[0] for a, b in zip(edits, edits[1:]))
        original = texts[d.span.unit_path]
        fixed = apply_edits(original, edits)
        for hunk in d.fix.before.split(HUNK_SEPARATOR):
            assert hunk in original
        for hunk in d.fix.after.split(HUNK_SEPARATOR):
            assert hunk in fixed
