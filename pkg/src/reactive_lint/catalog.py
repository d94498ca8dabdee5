"""Rule identifiers, default severities and documentation metadata."""
from __future__ import annotations

from dataclasses import dataclass

from .diagnostics import Severity

NO_IMPLICIT_SUBSCRIPTIONS = "no-implicit-subscriptions"
NO_ASYNC_WITHOUT_ONPUSH = "no-async-without-onpush"
PREFER_SIGNAL = "prefer-signal"
NO_UNUSED_OBSERVABLES = "no-unused-observables"
USE_TAKEUNTILDESTROYED = "use-takeuntildestroyed"
NO_IMPERATIVE_IN_REACTIVE = "no-imperative-in-reactive"

INTERNAL_PARSE_ERROR = "internal/parse-error"
INTERNAL_MISSING_TEMPLATE = "internal/missing-template"
INTERNAL_READ_ERROR = "internal/read-error"
INTERNAL_FIX_SKIPPED = "internal/fix-skipped"
INTERNAL_TEMPLATE_NOTE = "internal/template-note"


@dataclass(frozen=True)
class RuleMeta:
    rule_id: str
    default_severity: Severity
    summary: str
    explanation: str
    doc_link: str


RULES: dict[str, RuleMeta] = {
    meta.rule_id: meta
    for meta in (
        RuleMeta(
            NO_IMPLICIT_SUBSCRIPTIONS,
            Severity.ERROR,
            "Subscriptions must be torn down with the component.",
            "A subscription opened in a component keeps running after the "
            "component is destroyed unless something ends it. The callback keeps "
            "the component instance reachable, so memory grows and stale "
            "handlers keep firing.",
            "https://angular.dev/ecosystem/rxjs-interop/take-until-destroyed",
        ),
        RuleMeta(
            NO_ASYNC_WITHOUT_ONPUSH,
            Severity.WARNING,
            "Components that render async streams should use OnPush.",
            "With the Default strategy every application tick re-checks this "
            "component even though its async-piped values only change on "
            "emission. OnPush limits checks to inputs, events and async "
            "emissions.",
            "https://angular.dev/best-practices/skipping-subtrees",
        ),
        RuleMeta(
            PREFER_SIGNAL,
            Severity.SUGGESTION,
            "Synchronous derived state reads better as computed().",
            "This stream only transforms local synchronous state. A computed "
            "signal expresses the same derivation without subscriptions, "
            "schedulers or teardown.",
            "https://angular.dev/guide/signals#computed-signals",
        ),
        RuleMeta(
            NO_UNUSED_OBSERVABLES,
            Severity.SUGGESTION,
            "Stream fields should have at least one consumer.",
            "Nothing reads this stream field in the class or its template. Dead "
            "streams make the data flow harder to follow and may still hold "
            "resources.",
            "https://rxjs.dev/guide/observable",
        ),
        RuleMeta(
            USE_TAKEUNTILDESTROYED,
            Severity.WARNING,
            "Prefer the built-in destroy interop over manual teardown.",
            "Hand-written teardown with a destroy subject, a boolean flag or "
            "stored subscriptions is easy to get subtly wrong. "
            "takeUntilDestroyed() ties the stream to the component lifetime "
            "with no extra members.",
            "https://angular.dev/ecosystem/rxjs-interop/take-until-destroyed",
        ),
        RuleMeta(
            NO_IMPERATIVE_IN_REACTIVE,
            Severity.WARNING,
            "Avoid assigning component state inside subscribe().",
            "Assigning fields from a subscribe callback hides the data flow and "
            "under OnPush the view may not notice the change. Writing to a "
            "signal with set() keeps updates tracked.",
            "https://angular.dev/guide/signals#writable-signals",
        ),
    )
}

RULE_IDS: tuple[str, ...] = tuple(RULES)
INTERNAL_IDS = frozenset(
    (
        INTERNAL_PARSE_ERROR,
        INTERNAL_MISSING_TEMPLATE,
        INTERNAL_READ_ERROR,
        INTERNAL_FIX_SKIPPED,
        INTERNAL_TEMPLATE_NOTE,
    )
)
