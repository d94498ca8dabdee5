"""Rules about component metadata and stream fields."""
from __future__ import annotations

from typing import Optional

from ..catalog import NO_ASYNC_WITHOUT_ONPUSH, NO_UNUSED_OBSERVABLES, PREFER_SIGNAL
from ..diagnostics import Diagnostic, Severity, TextEdits
from ..script.nodes import ArrayLiteral, ArrowFunction, Call, Identifier, NewExpression, ObjectLiteral
from ..semantic import (
    STREAM_CLASSES,
    SUBJECT_CLASSES,
    ComponentModel,
    callee_name,
    is_literalish,
    method_call,
    this_member,
    unwrap,
)
from .base import make_diagnostic
from .edits import ANGULAR_CORE, add_named_import, indent_at, removal_range, strip_dollar

SYNC_OPERATORS = frozenset(("map", "filter", "distinctUntilChanged", "startWith"))
_ONPUSH = "ChangeDetectionStrategy.OnPush"


# -- no-async-without-onpush -------------------------------------------------


def _onpush_edits(model: ComponentModel, edits: TextEdits) -> None:
    text = model.script.index.text
    deco = model.decorator
    entry_text = f"changeDetection: {_ONPUSH}"
    meta = deco.metadata_node
    if meta is None:
        close = text.rfind(")", deco.start, deco.end)
        edits.insert(close, f"{{ {entry_text} }}")
    else:
        existing = next((e for e in meta.entries if e.key == "changeDetection"), None)
        if existing is not None:
            edits.replace(existing.value.start, existing.value.end, _ONPUSH)
        elif not meta.entries:
            edits.replace(meta.start, meta.end, f"{{ {entry_text} }}")
        else:
            last = meta.entries[-1]
            tail = text[last.end:meta.end - 1]
            has_comma = tail.lstrip().startswith(",")
            if "\n" in text[meta.start:meta.end]:
                indent = indent_at(text, last.start)
                if has_comma:
                    at = last.end + tail.index(",") + 1
                    edits.insert(at, f"\n{indent}{entry_text},")
                else:
                    edits.insert(last.end, f",\n{indent}{entry_text}")
            elif has_comma:
                at = last.end + tail.index(",") + 1
                edits.insert(at, f" {entry_text}")
            else:
                edits.insert(last.end, f", {entry_text}")
    for start, end, repl in add_named_import(model.script, "ChangeDetectionStrategy", ANGULAR_CORE):
        edits.replace(start, end, repl)


def rule_no_async_without_onpush(model: ComponentModel, severity: Severity) -> list[Diagnostic]:
    if model.kind != "component" or model.change_detection != "Default" or model.decorator is None:
        return []
    usages = sum(b.pipes.count("async") for b in model.async_bindings)
    if not usages:
        return []
    edits = TextEdits(model.script.index)
    _onpush_edits(model, edits)
    noun = "usage" if usages == 1 else "usages"
    message = (
        f"'{model.class_name}' renders {usages} async pipe {noun} with Default change "
        f"detection; switch to ChangeDetectionStrategy.OnPush."
    )
    return [
        make_diagnostic(
            NO_ASYNC_WITHOUT_ONPUSH, severity, model.decorator_span, message, edits.build("safe_auto")
        )
    ]


# -- prefer-signal -------------------------------------------------------------


def _pipe_groups(expr) -> tuple[object, list[list]]:
    """(source, operator args per `.pipe(...)` in source order)."""
    groups = []
    node = unwrap(expr)
    while True:
        hit = method_call(node, "pipe")
        if hit is None:
            break
        obj, call = hit
        groups.append([unwrap(a) for a in call.args])
        node = unwrap(obj)
    groups.reverse()
    return node, groups


def _subject_source(node, model: ComponentModel) -> Optional[str]:
    name = this_member(unwrap(node))
    if name is None:
        return None
    f = model.field_named(name)
    if f is None or f.classification not in SUBJECT_CLASSES:
        return None
    return name


def _signal_source(source, model: ComponentModel) -> Optional[str]:
    """Text reading the signal counterpart of a local synchronous source."""
    name = _subject_source(source, model)
    if name is not None:
        return f"this.{strip_dollar(name)}()"
    if type(source) is not Call or callee_name(source) != "combineLatest":
        return None
    args = [unwrap(a) for a in source.args]
    if len(args) == 1 and type(args[0]) is ArrayLiteral:
        items = [unwrap(e) for e in args[0].elements]
    elif len(args) == 1 and type(args[0]) is ObjectLiteral:
        parts = []
        for entry in args[0].entries:
            inner = _subject_source(entry.value, model)
            if inner is None or entry.key is None:
                return None
            parts.append(f"{entry.key}: this.{strip_dollar(inner)}()")
        return "{ " + ", ".join(parts) + " }" if parts else None
    else:
        items = args
    names = [_subject_source(i, model) for i in items]
    if not names or None in names:
        return None
    return "[" + ", ".join(f"this.{strip_dollar(n)}()" for n in names) + "]"


def _computed_body(text: str, seed: str, operators: list[Call], indent: str) -> str:
    lines = []
    current = seed
    counter = 0

    def bind(value: str) -> str:
        nonlocal counter
        counter += 1
        var = f"v{counter}"
        lines.append(f"const {var} = {value};")
        return var

    for op in operators:
        name = callee_name(op)
        arg = unwrap(op.args[0]) if op.args else None
        src = text[op.start:op.end]
        if name == "map" and type(arg) is ArrowFunction:
            if len(arg.params) == 1 and not arg.is_block:
                param = text[arg.params[0].start:arg.params[0].end]
                lines.append(f"const {param} = {current};")
                current = bind(text[arg.body.start:arg.body.end])
            else:
                current = bind(f"({text[arg.start:arg.end]})({current})")
        elif name == "map" and arg is not None:
            current = bind(f"{text[arg.start:arg.end]}({current})")
        elif name == "filter":
            lines.append(f"// {src}: keep the last accepted value in a linkedSignal if needed")
        elif name == "distinctUntilChanged":
            lines.append("// computed() already skips notifications for equal values")
        elif name == "startWith":
            lines.append(f"// {src}: the source signal's initial value replaces startWith")
    lines.append(f"return {current};")
    inner = indent + "  "
    return "{\n" + "".join(f"{inner}{line}\n" for line in lines) + f"{indent}}}"


def rule_prefer_signal(model: ComponentModel, severity: Severity) -> list[Diagnostic]:
    out = []
    text = model.script.index.text
    own = {p.name for p in model.cls.properties}
    for f in model.fields:
        member = f.member
        if f.classification != "observable" or member is None or member.initializer is None:
            continue
        if f.name not in own:
            continue
        source, groups = _pipe_groups(member.initializer)
        operators = [a for g in groups for a in g]
        if not operators or any(
            type(a) is not Call or callee_name(a) not in SYNC_OPERATORS or type(unwrap(a.callee)) is not Identifier
            for a in operators
        ):
            continue
        seed = _signal_source(source, model)
        if seed is None:
            continue
        edits = TextEdits(model.script.index)
        indent = indent_at(text, member.start)
        body = _computed_body(text, seed, operators, indent)
        new_name = strip_dollar(f.name)
        edits.replace(member.name_start, member.initializer.end, f"{new_name} = computed(() => {body})")
        for start, end, repl in add_named_import(model.script, "computed", ANGULAR_CORE):
            edits.replace(start, end, repl)
        ops = ", ".join(callee_name(a) for a in operators)
        message = f"'{f.name}' only applies synchronous operators ({ops}) to local state; use computed()."
        note = "Assumes each source subject has a signal counterpart without the '$' suffix."
        out.append(
            make_diagnostic(
                PREFER_SIGNAL, severity, f.declaration_span, message, edits.build("suggestion_only", note)
            )
        )
    return out


# -- no-unused-observables ---------------------------------------------------


def _pure_construction(expr) -> bool:
    expr = unwrap(expr)
    if type(expr) is NewExpression:
        return all(is_literalish(a) for a in expr.args)
    if type(expr) is Call and type(unwrap(expr.callee)) is Identifier:
        return all(is_literalish(a) for a in expr.args)
    return False


def _declares_missing_template(model: ComponentModel) -> bool:
    if model.decorator is None or model.has_template:
        return False
    meta = model.decorator.metadata
    return "template" in meta or "templateUrl" in meta


def rule_no_unused_observables(model: ComponentModel, severity: Severity) -> list[Diagnostic]:
    out = []
    text = model.script.index.text
    own = {p.name for p in model.cls.properties}
    missing_template = _declares_missing_template(model)
    for f in model.fields:
        member = f.member
        if f.classification not in STREAM_CLASSES or member is None or f.name not in own:
            continue
        if f.template_read_count or f.class_read_count or f.is_subscribed:
            continue
        if f.is_piped_source or f.passed_to_interop or f.has_angular_decorator:
            continue
        if member.is_parameter_property or member.is_static:
            continue
        if missing_template and f.visibility != "private":
            continue
        safe = not f.written and (member.initializer is None or _pure_construction(member.initializer))
        edits = TextEdits(model.script.index)
        start, end = removal_range(text, member.start, member.end)
        edits.replace(start, end, "")
        kind = f.classification.replace("_", " ")
        message = f"{kind.capitalize()} field '{f.name}' is never read, subscribed or piped; delete it."
        note = "" if safe else "The initializer or later writes may have side effects; review before deleting."
        out.append(
            make_diagnostic(
                NO_UNUSED_OBSERVABLES,
                severity,
                f.declaration_span,
                message,
                edits.build("safe_auto" if safe else "suggestion_only", note),
            )
        )
    return out

