"""Rules about explicit `.subscribe()` calls."""
from __future__ import annotations

import re

from typing import Optional

from ..catalog import NO_IMPERATIVE_IN_REACTIVE, NO_IMPLICIT_SUBSCRIPTIONS, USE_TAKEUNTILDESTROYED
from ..diagnostics import Diagnostic, Severity, TextEdits
from ..script.nodes import Assignment, MethodMember, walk
from ..semantic import (
    BOUNDED,
    LEGACY_COVERED,
    NONE,
    STORED_AND_UNSUBSCRIBED,
    UNKNOWN,
    ComponentModel,
    SubscriptionSite,
    method_call,
    this_member,
)
from .base import make_diagnostic
from .edits import ANGULAR_CORE, RXJS_INTEROP, add_named_import, indent_at, removal_range

_INJECTION_NOTE = (
    "takeUntilDestroyed() needs an injection context (constructor or field "
    "initializer); elsewhere pass a DestroyRef, e.g. takeUntilDestroyed(this.destroyRef)."
)


def _site_member(model: ComponentModel, site: SubscriptionSite):
    """Method or property whose body contains the site."""
    call = site.call
    for m in model.cls.methods:
        if m.start <= call.start and call.end <= m.end:
            return m
    for p in model.cls.properties:
        if p.start <= call.start and call.end <= p.end:
            return p
    return None


def _destroy_ref_member(model: ComponentModel) -> Optional[str]:
    for f in model.fields:
        member = f.member
        if member is None:
            continue
        if member.type_annotation is not None and member.type_annotation.head == "DestroyRef":
            return f.name
        init = member.initializer
        if init is not None and "DestroyRef" in model.script.index.text[init.start:init.end]:
            return f.name
    return None


def operator_text(model: ComponentModel, site: SubscriptionSite) -> str:
    member = _site_member(model, site)
    in_injection_context = not isinstance(member, MethodMember) or member.name == "constructor"
    if in_injection_context:
        return "takeUntilDestroyed()"
    ref = _destroy_ref_member(model)
    if ref is not None:
        return f"takeUntilDestroyed(this.{ref})"
    return "takeUntilDestroyed()"


def add_operator_edits(model: ComponentModel, site: SubscriptionSite, edits: TextEdits, op: str) -> None:
    """Make `op` the last operator before the subscribe call."""
    text = model.script.index.text
    receiver = site.call.callee.object
    hit = method_call(receiver, "pipe")
    if hit is not None:
        pipe_call = hit[1]
        if pipe_call.args:
            last = pipe_call.args[-1]
            close = pipe_call.end - 1
            # keep multi-line pipes one operator per line
            between = text[last.end:close]
            if "\n" in between:
                indent = indent_at(text, last.start)
                trailing = between.lstrip().startswith(",")
                if trailing:
                    comma = last.end + between.index(",") + 1
                    edits.insert(comma, f"\n{indent}{op},")
                else:
                    edits.insert(last.end, f",\n{indent}{op}")
            else:
                edits.insert(last.end, f", {op}")
        else:
            edits.insert(pipe_call.end - 1, op)
    else:
        edits.insert(receiver.end, f".pipe({op})")
    for start, end, repl in add_named_import(model.script, "takeUntilDestroyed", RXJS_INTEROP):
        edits.replace(start, end, repl)


def rule_no_implicit_subscriptions(model: ComponentModel, severity: Severity) -> list[Diagnostic]:
    out = []
    for site in model.subscriptions:
        if not site.receiver_is_stream or site.cleanup.status not in (NONE, UNKNOWN):
            continue
        edits = TextEdits(model.script.index)
        add_operator_edits(model, site, edits, operator_text(model, site))
        fix = edits.build("suggestion_only", _INJECTION_NOTE)
        if site.cleanup.status == UNKNOWN:
            sev = severity.downgrade()
            base = model.cls.extends_name
            message = (
                f"Add takeUntilDestroyed() to this subscription unless base class "
                f"'{base}' already tears it down."
            )
        else:
            sev = severity
            message = "Add takeUntilDestroyed() so this subscription ends with the component."
        out.append(make_diagnostic(NO_IMPLICIT_SUBSCRIPTIONS, sev, site.span, message, fix))
    return out


def _teardown_lines(model: ComponentModel, name: str) -> list[tuple[int, int]]:
    """Statements in ngOnDestroy that only serve the teardown member `name`."""
    text = model.script.index.text
    method = model.cls.method("ngOnDestroy")
    if method is None:
        return []
    ranges = []
    for stmt in method.body:
        names = {this_member(n) for n in walk(stmt)} - {None}
        if names == {name}:
            ranges.append(removal_range(text, stmt.start, stmt.end))
    return ranges


def rule_use_takeuntildestroyed(model: ComponentModel, severity: Severity) -> list[Diagnostic]:
    out = []
    index = model.script.index
    text = index.text
    legacy = [
        s for s in model.subscriptions if s.receiver_is_stream and s.cleanup.status == LEGACY_COVERED
    ]
    for site in legacy:
        edits = TextEdits(index)
        op = operator_text(model, site)
        mech = site.cleanup
        if mech.mechanism == STORED_AND_UNSUBSCRIBED:
            store = site.store_node
            if isinstance(store, Assignment) and this_member(store.target) == site.stored_into:
                edits.replace(store.start, store.value.start, "")
            add_operator_edits(model, site, edits, op)
            sharing = [s for s in legacy if s.stored_into == site.stored_into]
            if len(sharing) == 1:
                for start, end in _teardown_lines(model, site.stored_into):
                    edits.replace(start, end, "")
            message = (
                f"Replace the stored subscription '{site.stored_into}' and its "
                f"ngOnDestroy unsubscribe with takeUntilDestroyed()."
            )
        else:
            target = next(
                c for c in site.operator_calls
                if c.start == index.char_offset(mech.evidence_span.start_byte)
            )
            edits.replace(target.start, target.end, op)
            for start, end, repl in add_named_import(model.script, "takeUntilDestroyed", RXJS_INTEROP):
                edits.replace(start, end, repl)
            if mech.via_flag:
                message = f"Replace the '{site.teardown_field}' flag teardown with takeUntilDestroyed()."
            else:
                message = f"Replace takeUntil(this.{site.teardown_field}) with takeUntilDestroyed()."
        fix = edits.build("suggestion_only", _INJECTION_NOTE)
        out.append(make_diagnostic(USE_TAKEUNTILDESTROYED, severity, site.span, message, fix))

    refs: dict[str, int] = {}
    for site in legacy:
        if site.teardown_field is not None:
            refs[site.teardown_field] = refs.get(site.teardown_field, 0) + 1
    own = {p.name for p in model.cls.properties}
    for name, count in sorted(refs.items()):
        f = model.field_named(name)
        if f is None or f.member is None or f.member.is_parameter_property or name not in own:
            continue
        if f.template_read_count or f.class_read_count != count + model.teardown_reads.get(name, 0):
            continue
        member = f.member
        edits = TextEdits(index)
        start, end = removal_range(text, member.start, member.end)
        edits.replace(start, end, "")
        for s, e in _teardown_lines(model, name):
            edits.replace(s, e, "")
        kind = "flag" if any(s.cleanup.via_flag for s in legacy if s.teardown_field == name) else "subject"
        message = f"Remove teardown {kind} '{name}' once its subscriptions use takeUntilDestroyed()."
        out.append(
            make_diagnostic(
                USE_TAKEUNTILDESTROYED,
                severity,
                f.declaration_span,
                message,
                edits.build("suggestion_only", "Apply together with the fixes on each subscription."),
            )
        )
    return out


def _signal_declaration_edit(model: ComponentModel, name: str, edits: TextEdits) -> None:
    f = model.field_named(name)
    if f is None or f.member is None or f.member.is_parameter_property:
        return
    member = f.member
    text = model.script.index.text
    type_src = None
    if member.type_annotation is not None:
        type_src = text[member.type_annotation.start:member.type_annotation.end]
    generic = f"<{type_src}>" if type_src else ""
    if member.initializer is not None:
        init = member.initializer
        init_src = text[init.start:init.end]
        edits.replace(member.name_end, init.end, f" = signal{generic}({init_src})")
    else:
        end = member.type_annotation.end if member.type_annotation is not None else member.name_end
        if type_src:
            generic = f"<{type_src} | undefined>"
        edits.replace(member.name_end, end, f" = signal{generic}(undefined)")


_COMPOUND = frozenset(("+=", "-=", "*=", "/=", "%=", "**=", "||=", "&&=", "??=", "|=", "&=", "^=", "<<=", ">>="))


def _fresh_name(value: str) -> str:
    words = set(re.findall(r"[A-Za-z_$][\w$]*", value))
    name = "prev"
    while name in words:
        name += "_"
    return name


def rule_no_imperative_in_reactive(model: ComponentModel, severity: Severity) -> list[Diagnostic]:
    out = []
    index = model.script.index
    text = index.text
    for site in model.subscriptions:
        if not site.receiver_is_stream or site.cleanup.status == BOUNDED:
            continue
        for node, (name, span) in zip(site.assignment_nodes, site.callback_assignments):
            edits = TextEdits(index)
            value = text[node.value.start:node.value.end]
            if node.op in _COMPOUND:
                prev = _fresh_name(value)
                repl = f"this.{name}.update({prev} => {prev} {node.op[:-1]} {value})"
                call = "update()"
            else:
                repl = f"this.{name}.set({value})"
                call = "set()"
            edits.replace(node.start, node.end, repl)
            _signal_declaration_edit(model, name, edits)
            for start, end, text_ in add_named_import(model.script, "signal", ANGULAR_CORE):
                edits.replace(start, end, text_)
            message = f"Make '{name}' a signal and call {call} instead of assigning it inside subscribe()."
            out.append(
                make_diagnostic(
                    NO_IMPERATIVE_IN_REACTIVE,
                    severity,
                    span,
                    message,
                    edits.build(
                        "suggestion_only",
                        "Template and class reads of the field become calls, e.g. "
                        f"{name}() instead of {name}.",
                    ),
                )
            )
    return out
