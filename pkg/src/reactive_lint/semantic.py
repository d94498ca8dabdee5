"""Per-component semantic model.

`build_models` turns one parsed script (plus the templates resolved for its
components) into `ComponentModel` records: classified fields, every
`.subscribe()` call with the cleanup mechanism that covers it, change
detection strategy and template binding facts. Rules only query these
records.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .script.nodes import (
    ArrayLiteral,
    ArrowFunction,
    Assignment,
    Call,
    ClassDecl,
    Declarator,
    DecoratorNode,
    Identifier,
    Literal,
    MemberAccess,
    MethodMember,
    NewExpression,
    ObjectLiteral,
    PropertyMember,
    UnknownExpr,
    iter_children,
    walk,
)
from .script.parser import ScriptAst
from .spans import Span
from .template.parser import BindingRef, TemplateAst, collect_bindings

# field classifications
OBSERVABLE = "observable"
SUBJECT = "subject"
BEHAVIOR_SUBJECT = "behavior_subject"
SIGNAL = "signal"
COMPUTED_SIGNAL = "computed_signal"
SUBSCRIPTION_HANDLE = "subscription_handle"
OTHER = "other"
STREAM_CLASSES = frozenset((OBSERVABLE, SUBJECT, BEHAVIOR_SUBJECT))
SUBJECT_CLASSES = frozenset((SUBJECT, BEHAVIOR_SUBJECT))

# cleanup statuses and mechanisms
COVERED = "covered"
LEGACY_COVERED = "legacy_covered"
BOUNDED = "bounded"
NONE = "none"
UNKNOWN = "unknown"
TAKE_UNTIL_DESTROYED = "take_until_destroyed"
TAKE_UNTIL_SUBJECT = "take_until_subject"
BOUNDED_OPERATOR = "bounded_operator"
STORED_AND_UNSUBSCRIBED = "stored_and_unsubscribed"
DESTROY_REF = "destroy_ref"

LIFECYCLE_HOOKS = frozenset(
    """ngOnChanges ngOnInit ngDoCheck ngAfterContentInit ngAfterContentChecked
    ngAfterViewInit ngAfterViewChecked ngOnDestroy""".split()
)
ANGULAR_MEMBER_DECORATORS = frozenset(
    """Input Output ViewChild ViewChildren ContentChild ContentChildren
    HostBinding HostListener""".split()
)
_SIGNAL_FACTORIES = frozenset(("signal", "input", "model", "toSignal", "linkedSignal"))
_SUBJECT_TYPES = {
    "Subject": SUBJECT,
    "ReplaySubject": SUBJECT,
    "AsyncSubject": SUBJECT,
    "BehaviorSubject": BEHAVIOR_SUBJECT,
}
_OBSERVABLE_TYPES = frozenset(("Observable", "ConnectableObservable", "GroupedObservable"))
_SIGNAL_TYPES = {"Signal": COMPUTED_SIGNAL, "WritableSignal": SIGNAL, "InputSignal": SIGNAL, "ModelSignal": SIGNAL}
OBSERVABLE_CREATORS = frozenset(
    """of from interval timer combineLatest merge forkJoin zip race concat defer
    fromEvent fromEventPattern iif range throwError toObservable partition
    using generate scheduled""".split()
)
BOUNDED_OPERATORS = frozenset(("take", "first", "takeWhile"))


@dataclass(frozen=True)
class CleanupStatus:
    status: str
    mechanism: Optional[str] = None
    evidence_span: Optional[Span] = None
    via_flag: bool = False

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "mechanism": self.mechanism,
            "evidenceSpan": self.evidence_span.to_dict() if self.evidence_span else None,
            "viaFlag": self.via_flag,
        }


@dataclass
class ReactiveField:
    name: str
    classification: str
    evidence: frozenset[str]
    declaration_span: Span
    visibility: str
    template_read_count: int = 0
    class_read_count: int = 0
    is_piped_source: bool = False
    is_subscribed: bool = False
    passed_to_interop: bool = False
    written: bool = False
    has_angular_decorator: bool = False
    member: Optional[PropertyMember] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "classification": self.classification,
            "evidence": sorted(self.evidence),
            "templateReadCount": self.template_read_count,
            "classReadCount": self.class_read_count,
            "isPipedSource": self.is_piped_source,
            "visibility": self.visibility,
            "span": self.declaration_span.to_dict(),
        }


@dataclass
class SubscriptionSite:
    span: Span
    receiver_text: str
    pipe_operators: list[str]
    cleanup: CleanupStatus
    receiver_is_stream: bool = True
    stored_into: Optional[str] = None
    stored_local: Optional[str] = None
    callback_assignments: list[tuple[str, Span]] = field(default_factory=list)
    # teardown subject or flag field behind a legacy mechanism
    teardown_field: Optional[str] = None
    call: Optional[Call] = field(default=None, repr=False)
    operator_calls: list[Call] = field(default_factory=list, repr=False)
    assignment_nodes: list[Assignment] = field(default_factory=list, repr=False)
    store_node: Optional[object] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "span": self.span.to_dict(),
            "receiver": self.receiver_text,
            "receiverIsStream": self.receiver_is_stream,
            "pipeOperators": list(self.pipe_operators),
            "cleanup": self.cleanup.to_dict(),
            "storedInto": self.stored_into,
            "callbackAssignments": [name for name, _ in self.callback_assignments],
        }


@dataclass
class ComponentModel:
    class_name: str
    kind: str  # component | directive | other
    change_detection: str  # Default | OnPush | Unknown
    lifecycle_hooks: frozenset[str]
    fields: list[ReactiveField]
    subscriptions: list[SubscriptionSite]
    template_bindings: list[BindingRef]
    extends_unresolved_base: bool
    decorator_span: Optional[Span]
    class_span: Span
    has_template: bool = False
    script: Optional[ScriptAst] = field(default=None, repr=False)
    cls: Optional[ClassDecl] = field(default=None, repr=False)
    decorator: Optional[DecoratorNode] = field(default=None, repr=False)
    # reads of `this.X` inside ngOnDestroy (and helpers it calls)
    teardown_reads: Counter = field(default_factory=Counter, repr=False)

    @property
    def path(self) -> str:
        return self.class_span.unit_path

    def field_named(self, name: str) -> Optional[ReactiveField]:
        for f in self.fields:
            if f.name == name:
                return f
        return None

    @property
    def async_bindings(self) -> list[BindingRef]:
        return [b for b in self.template_bindings if b.is_render_path and "async" in b.pipes]

    def to_dict(self) -> dict:
        return {
            "className": self.class_name,
            "kind": self.kind,
            "changeDetection": self.change_detection,
            "lifecycleHooks": sorted(self.lifecycle_hooks),
            "extendsUnresolvedBase": self.extends_unresolved_base,
            "fields": [f.to_dict() for f in self.fields],
            "subscriptions": [s.to_dict() for s in self.subscriptions],
            "templateBindings": [
                {"kind": b.kind, "source": b.source, "roots": list(b.roots), "pipes": list(b.pipes)}
                for b in self.template_bindings
            ],
        }


# -- small syntactic helpers ---------------------------------------------


def this_member(node) -> Optional[str]:
    """`X` when `node` is `this.X`."""
    if type(node) is MemberAccess and type(node.object) is Identifier and node.object.name == "this":
        return node.property
    return None


def unwrap(node):
    """Strip parentheses and non-null assertions."""
    while type(node) is UnknownExpr and node.label in ("parens", "non-null") and len(node.children) == 1:
        node = node.children[0]
    return node


def callee_name(call) -> Optional[str]:
    callee = unwrap(call.callee) if type(call) is Call else None
    if type(callee) is Identifier:
        return callee.name
    if type(callee) is MemberAccess:
        return callee.property
    return None


def method_call(node, name: str):
    """(receiver, call) when `node` is `receiver.name(...)`."""
    node = unwrap(node)
    if type(node) is Call:
        callee = unwrap(node.callee)
        if type(callee) is MemberAccess and callee.property == name:
            return callee.object, node
    return None


def pipe_chain(receiver) -> tuple[list[Call], bool]:
    """Operator calls of the `.pipe(...)` chain ending at `receiver`.

    Returns the calls in source order and whether any `.pipe(` was seen.
    """
    groups: list[list] = []
    node = unwrap(receiver)
    seen_pipe = False
    while True:
        hit = method_call(node, "pipe")
        if hit is None:
            break
        seen_pipe = True
        obj, call = hit
        groups.append([unwrap(a) for a in call.args])
        node = unwrap(obj)
    ops: list[Call] = []
    for group in reversed(groups):
        ops.extend(a for a in group if type(a) is Call)
    return ops, seen_pipe


def initializer_head(expr) -> tuple[str, Optional[str]]:
    """('call'|'new'|'other', name) for the outermost construction."""
    expr = unwrap(expr)
    if type(expr) is NewExpression:
        return "new", expr.head.rsplit(".", 1)[-1]
    if type(expr) is Call:
        callee = unwrap(expr.callee)
        # `input.required<T>()` and friends
        if type(callee) is MemberAccess and type(unwrap(callee.object)) is Identifier:
            base = unwrap(callee.object).name
            if base in _SIGNAL_FACTORIES and callee.property == "required":
                return "call", base
        return "call", callee_name(expr)
    return "other", None


def _produces_observable(expr) -> bool:
    expr = unwrap(expr)
    if type(expr) is Call:
        name = callee_name(expr)
        if name in ("pipe", "asObservable") or name in OBSERVABLE_CREATORS:
            return True
    return False


def is_literalish(expr) -> bool:
    expr = unwrap(expr)
    t = type(expr)
    if t is Literal:
        return True
    if t is ArrayLiteral:
        return all(is_literalish(e) for e in expr.elements)
    if t is ObjectLiteral:
        return all(is_literalish(e.value) for e in expr.entries)
    if t is Identifier:
        return expr.name in ("undefined", "NaN", "Infinity")
    if t is UnknownExpr and expr.label.startswith("unary"):
        return all(is_literalish(c) for c in expr.children)
    return False


def classify_field(prop: PropertyMember) -> tuple[str, frozenset[str]]:
    """Classification and evidence for one property member."""
    name = prop.name
    evidence: set[str] = set()
    dollar = name.endswith("$")
    if dollar:
        evidence.add("dollar_suffix")
    init = prop.initializer
    type_head = prop.type_annotation.head if prop.type_annotation else None
    type_args = prop.type_annotation.args if prop.type_annotation else []

    kind, head = initializer_head(init) if init is not None else ("other", None)
    if kind == "call" and head in _SIGNAL_FACTORIES:
        return SIGNAL, frozenset(evidence | {"initializer_call"})
    if kind == "call" and head == "computed":
        return COMPUTED_SIGNAL, frozenset(evidence | {"initializer_call"})
    if kind == "new" and head == "BehaviorSubject":
        return BEHAVIOR_SUBJECT, frozenset(evidence | {"initializer_call"})
    if kind == "new" and head in ("Subject", "ReplaySubject", "AsyncSubject"):
        return SUBJECT, frozenset(evidence | {"initializer_call"})
    if type_head in _SUBJECT_TYPES and init is None:
        return _SUBJECT_TYPES[type_head], frozenset(evidence | {"type_annotation"})

    observable_type = type_head in _OBSERVABLE_TYPES
    if observable_type:
        evidence.add("type_annotation")
    if init is not None and (
        _produces_observable(init) or (dollar and kind == "call" and not observable_type)
    ):
        evidence.add("initializer_call")
    if observable_type or "initializer_call" in evidence:
        return OBSERVABLE, frozenset(evidence)

    if type_head == "Subscription" or (type_head == "Array" and type_args[:1] == ["Subscription"]):
        return SUBSCRIPTION_HANDLE, frozenset(evidence)
    if kind == "new" and head == "Subscription":
        return SUBSCRIPTION_HANDLE, frozenset(evidence)
    if type_head in _SIGNAL_TYPES:
        return _SIGNAL_TYPES[type_head], frozenset(evidence | {"type_annotation"})

    if dollar:
        contrary = type_head is not None or (init is not None and is_literalish(init))
        if not contrary:
            return OBSERVABLE, frozenset(evidence)
    return OTHER, frozenset()


# -- class walking -----------------------------------------------------------


@dataclass
class _ClassFacts:
    reads: Counter = field(default_factory=Counter)
    writes: set = field(default_factory=set)
    subscribed: set = field(default_factory=set)
    interop: set = field(default_factory=set)
    piped_sources: set = field(default_factory=set)
    # (subscribe call, ancestors, enclosing member, property name if initializer)
    sites: list = field(default_factory=list)
    on_destroy_calls: list = field(default_factory=list)


_ASSIGN_PARENT_TYPES = (Assignment,)


def _visit(node, ancestors: list, facts: _ClassFacts, member, prop_name) -> None:
    t = type(node)
    if t is MemberAccess:
        name = this_member(node)
        if name is not None:
            parent = ancestors[-1] if ancestors else None
            if type(parent) is Assignment and parent.target is node:
                facts.writes.add(name)
                if parent.op != "=":
                    facts.reads[name] += 1
            else:
                facts.reads[name] += 1
                if type(parent) is MemberAccess and parent.object is node:
                    if parent.property == "subscribe":
                        facts.subscribed.add(name)
                    elif parent.property == "pipe":
                        facts.piped_sources.add(name)
    elif t is Call:
        callee = node.callee
        if type(callee) is MemberAccess:
            if callee.property == "subscribe":
                facts.sites.append((node, tuple(ancestors), member, prop_name))
            elif callee.property == "onDestroy":
                facts.on_destroy_calls.append((node, member))
        elif type(callee) is Identifier and callee.name in ("toSignal", "toObservable"):
            for arg in node.args:
                name = this_member(unwrap(arg))
                if name is not None:
                    facts.interop.add(name)
    elif t is ArrowFunction:
        for p in node.params:
            if p.default is not None:
                ancestors.append(node)
                _visit(p.default, ancestors, facts, member, prop_name)
                ancestors.pop()
    ancestors.append(node)
    for child in iter_children(node):
        _visit(child, ancestors, facts, member, prop_name)
    ancestors.pop()


def _collect_class_facts(members: list[PropertyMember], methods: list[MethodMember]) -> _ClassFacts:
    facts = _ClassFacts()
    for prop in members:
        if prop.initializer is not None:
            _visit(prop.initializer, [], facts, prop, prop.name)
    for method in methods:
        for p in method.params:
            if p.default is not None:
                _visit(p.default, [], facts, method, None)
        for stmt in method.body:
            _visit(stmt, [], facts, method, None)
    return facts


def _method_nodes(method: MethodMember):
    for stmt in method.body:
        yield from walk(stmt)


def _teardown_methods(methods: dict[str, MethodMember]) -> list[MethodMember]:
    """ngOnDestroy plus the methods it calls through `this.m()`, transitively."""
    start = methods.get("ngOnDestroy")
    if start is None:
        return []
    out: list[MethodMember] = []
    seen: set[str] = set()
    todo = [start]
    while todo:
        m = todo.pop()
        if m.name in seen:
            continue
        seen.add(m.name)
        out.append(m)
        for node in _method_nodes(m):
            if type(node) is Call:
                name = this_member(unwrap(node.callee))
                if name is not None and name in methods and name not in seen:
                    todo.append(methods[name])
    return out


@dataclass
class _Teardown:
    completed: set = field(default_factory=set)  # subjects with next()/complete()
    unsubscribed: set = field(default_factory=set)  # members with unsubscribe()
    flag_values: dict = field(default_factory=dict)  # member -> literal assigned
    reads: Counter = field(default_factory=Counter)


def _contains_unsubscribe(node) -> bool:
    return any(
        type(n) is Call and callee_name(n) == "unsubscribe" for n in walk(node)
    )


def _teardown_facts(methods: list[MethodMember]) -> _Teardown:
    td = _Teardown()
    for m in methods:
        for node in _method_nodes(m):
            t = type(node)
            if t is MemberAccess:
                name = this_member(node)
                if name is not None:
                    td.reads[name] += 1
            elif t is Call:
                callee = unwrap(node.callee)
                if type(callee) is not MemberAccess:
                    continue
                obj = unwrap(callee.object)
                target = this_member(obj)
                if callee.property in ("next", "complete") and target is not None:
                    td.completed.add(target)
                elif callee.property == "unsubscribe" and target is not None:
                    td.unsubscribed.add(target)
                elif callee.property in ("forEach", "map") and any(
                    _contains_unsubscribe(a) for a in node.args
                ):
                    if target is not None:
                        td.unsubscribed.add(target)
                    elif type(obj) is ArrayLiteral:
                        for el in obj.elements:
                            name = this_member(unwrap(el))
                            if name is not None:
                                td.unsubscribed.add(name)
            elif t is Assignment and node.op == "=":
                name = this_member(node.target)
                value = unwrap(node.value)
                if name is not None and type(value) is Literal and value.kind == "boolean":
                    td.flag_values[name] = value.raw
    # assignments count as writes, not reads
    for m in methods:
        for node in _method_nodes(m):
            if type(node) is Assignment and node.op == "=":
                name = this_member(node.target)
                if name is not None:
                    td.reads[name] -= 1
    return td


def flag_predicate(call: Call) -> Optional[tuple[str, bool]]:
    """(field, value that keeps the stream alive) for `takeWhile(() => this.f)`."""
    if not call.args:
        return None
    fn = unwrap(call.args[0])
    if type(fn) is not ArrowFunction or fn.is_block or fn.params:
        return None
    body = unwrap(fn.body)
    negated = False
    if type(body) is UnknownExpr and body.label == "unary !" and len(body.children) == 1:
        negated = True
        body = unwrap(body.children[0])
    name = this_member(body)
    if name is None:
        return None
    return name, not negated


# -- model construction -------------------------------------------------------


def _component_kind(cls: ClassDecl) -> tuple[str, Optional[DecoratorNode]]:
    for name, kind in (("Component", "component"), ("Directive", "directive")):
        deco = cls.decorator(name)
        if deco is not None:
            return kind, deco
    return "other", None


def _change_detection(decorator: Optional[DecoratorNode], text: str) -> str:
    if decorator is None:
        return "Default"
    value = decorator.metadata.get("changeDetection")
    if value is None:
        return "Default"
    src = text[value.start:value.end].strip()
    if src.endswith("OnPush"):
        return "OnPush"
    if src.endswith("Default"):
        return "Default"
    return "Unknown"


def _lineage(cls: ClassDecl, by_name: Mapping[str, ClassDecl]) -> tuple[list[ClassDecl], bool]:
    """The class and its same-file ancestors; flag when the chain leaves the file."""
    chain = [cls]
    seen = {cls.name}
    current = cls
    while current.extends_name is not None:
        base = by_name.get(current.extends_name)
        if base is None or base.name in seen:
            return chain, True
        chain.append(base)
        seen.add(base.name)
        current = base
    return chain, False


def _merged_members(chain: list[ClassDecl]) -> tuple[list[PropertyMember], dict[str, MethodMember]]:
    props: dict[str, PropertyMember] = {}
    methods: dict[str, MethodMember] = {}
    for cls in chain:
        for p in cls.properties:
            if not p.is_static:
                props.setdefault(p.name, p)
        for m in cls.methods:
            if not m.is_static and m.accessor is None:
                methods.setdefault(m.name, m)
    return list(props.values()), methods


def is_inject_destroy_ref(expr) -> bool:
    """`inject(DestroyRef)`."""
    expr = unwrap(expr)
    return (
        type(expr) is Call
        and callee_name(expr) == "inject"
        and len(expr.args) >= 1
        and type(unwrap(expr.args[0])) is Identifier
        and unwrap(expr.args[0]).name == "DestroyRef"
    )


def _destroy_ref_names(props: list[PropertyMember], methods: Iterable[MethodMember]) -> tuple[set, set]:
    """Members and locals/parameters holding a DestroyRef."""
    members: set[str] = set()
    locals_: set[str] = set()

    for p in props:
        if (p.type_annotation and p.type_annotation.head == "DestroyRef") or (
            p.initializer is not None and is_inject_destroy_ref(p.initializer)
        ):
            members.add(p.name)
    for m in methods:
        for param in m.params:
            if param.type_head == "DestroyRef":
                locals_.add(param.name)
        for node in _method_nodes(m):
            if type(node) is Declarator and (
                (node.type_annotation and node.type_annotation.head == "DestroyRef")
                or (node.initializer is not None and is_inject_destroy_ref(node.initializer))
            ):
                locals_.add(node.name)
    return members, locals_


def _destroy_ref_teardowns(facts: _ClassFacts, members: set, locals_: set) -> tuple[set, set]:
    """Members and locals unsubscribed inside a DestroyRef `onDestroy` callback."""
    by_member: set[str] = set()
    by_local: set[str] = set()
    for call, _ in facts.on_destroy_calls:
        obj = unwrap(call.callee.object)
        holder = this_member(obj)
        if not (
            (holder is not None and holder in members)
            or (type(obj) is Identifier and obj.name in locals_)
            or is_inject_destroy_ref(obj)
        ):
            continue
        for arg in call.args:
            for node in walk(arg):
                hit = method_call(node, "unsubscribe")
                if hit is None:
                    continue
                target = unwrap(hit[0])
                name = this_member(target)
                if name is not None:
                    by_member.add(name)
                elif type(target) is Identifier:
                    by_local.add(target.name)
    return by_member, by_local


def _callback_assignments(call: Call) -> list[Assignment]:
    """`this.X = ...` assignments inside the callbacks passed to subscribe."""
    roots = []
    for arg in call.args:
        arg = unwrap(arg)
        if type(arg) is ArrowFunction:
            roots.append(arg)
        elif type(arg) is ObjectLiteral:
            roots.extend(unwrap(e.value) for e in arg.entries if type(unwrap(e.value)) is ArrowFunction)
    out: list[Assignment] = []
    stack = list(reversed(roots))
    while stack:
        node = stack.pop()
        if type(node) is Call and method_call(node, "subscribe") is not None:
            # a nested subscription reports its own assignments
            continue
        if type(node) is Assignment and this_member(node.target) is not None:
            out.append(node)
        if type(node) is ArrowFunction:
            kids = list(node.body) if node.is_block else [node.body]
        else:
            kids = list(iter_children(node))
        kids.reverse()
        stack.extend(kids)
    out.sort(key=lambda a: a.start)
    return out


def _storage(call: Call, ancestors: tuple, prop_name: Optional[str]):
    """Where the subscription returned by `call` is kept."""
    child = call
    for parent in reversed(ancestors):
        t = type(parent)
        if t is UnknownExpr and parent.label in ("parens", "non-null"):
            child = parent
            continue
        if t is Assignment and parent.value is child:
            name = this_member(parent.target)
            if name is not None:
                return name, None, parent
            if type(parent.target) is Identifier:
                return None, parent.target.name, parent
            return None, None, None
        if t is Declarator and parent.initializer is child:
            return None, parent.name, parent
        if t is Call and child in parent.args:
            hit = unwrap(parent.callee)
            if type(hit) is MemberAccess and hit.property in ("add", "push"):
                name = this_member(unwrap(hit.object))
                if name is not None:
                    return name, None, parent
            return None, None, None
        if t is ArrayLiteral:
            child = parent
            continue
        return None, None, None
    if prop_name is not None and not ancestors:
        return prop_name, None, None
    return None, None, None


def _local_store_target(member, local: str) -> Optional[str]:
    """Member that receives local subscription `local` (`this.subs.add(local)`)."""
    if not isinstance(member, MethodMember):
        return None
    for node in _method_nodes(member):
        if type(node) is Call:
            callee = unwrap(node.callee)
            if type(callee) is MemberAccess and callee.property in ("add", "push"):
                target = this_member(unwrap(callee.object))
                if target is not None and any(
                    type(unwrap(a)) is Identifier and unwrap(a).name == local for a in node.args
                ):
                    return target
        elif type(node) is Assignment and node.op == "=":
            target = this_member(node.target)
            value = unwrap(node.value)
            if target is not None and type(value) is Identifier and value.name == local:
                return target
    return None


def _resolve_cleanup(
    site: SubscriptionSite,
    ops: list[Call],
    fields: Mapping[str, ReactiveField],
    td: _Teardown,
    teardown_members: set,
    teardown_locals: set,
    unresolved_base: bool,
    span_of,
) -> CleanupStatus:
    names = [callee_name(op) for op in ops]
    for op, name in zip(ops, names):
        if name == "takeUntilDestroyed":
            return CleanupStatus(COVERED, TAKE_UNTIL_DESTROYED, span_of(op))
    if (site.stored_into and site.stored_into in teardown_members) or (
        site.stored_local and site.stored_local in teardown_locals
    ):
        return CleanupStatus(COVERED, DESTROY_REF)
    for op, name in zip(ops, names):
        if name == "takeUntil" and op.args:
            subject = this_member(unwrap(op.args[0]))
            f = fields.get(subject) if subject else None
            if f is not None and f.classification in SUBJECT_CLASSES and subject in td.completed:
                site.teardown_field = subject
                return CleanupStatus(LEGACY_COVERED, TAKE_UNTIL_SUBJECT, span_of(op))
        if name == "takeWhile":
            flag = flag_predicate(op)
            if flag is not None:
                fname, alive_value = flag
                stop = "false" if alive_value else "true"
                if td.flag_values.get(fname) == stop:
                    site.teardown_field = fname
                    return CleanupStatus(LEGACY_COVERED, TAKE_UNTIL_SUBJECT, span_of(op), via_flag=True)
    if site.stored_into and site.stored_into in td.unsubscribed:
        return CleanupStatus(LEGACY_COVERED, STORED_AND_UNSUBSCRIBED)
    for op, name in zip(ops, names):
        if name in BOUNDED_OPERATORS:
            if name == "takeWhile" and flag_predicate(op) is not None:
                continue
            return CleanupStatus(BOUNDED, BOUNDED_OPERATOR, span_of(op))
    if unresolved_base:
        return CleanupStatus(UNKNOWN)
    return CleanupStatus(NONE)


def _receiver_is_stream(receiver, seen_pipe: bool, fields: Mapping[str, ReactiveField]) -> bool:
    if seen_pipe:
        return True
    name = this_member(unwrap(receiver))
    if name is None:
        return True
    f = fields.get(name)
    if f is None or name.endswith("$"):
        return True
    return f.classification in STREAM_CLASSES


def build_model(
    cls: ClassDecl,
    script: ScriptAst,
    template: Optional[TemplateAst] = None,
    by_name: Optional[Mapping[str, ClassDecl]] = None,
) -> ComponentModel:
    index = script.index
    text = index.text
    if by_name is None:
        by_name = {c.name: c for c in script.classes}

    def span_of(node) -> Span:
        return index.span(node.start, node.end)

    kind, decorator = _component_kind(cls)
    chain, unresolved = _lineage(cls, by_name)
    props, methods = _merged_members(chain)

    fields: dict[str, ReactiveField] = {}
    for prop in props:
        classification, evidence = classify_field(prop)
        fields[prop.name] = ReactiveField(
            name=prop.name,
            classification=classification,
            evidence=evidence,
            declaration_span=index.span(prop.start, prop.end),
            visibility=prop.visibility,
            has_angular_decorator=any(d.name in ANGULAR_MEMBER_DECORATORS for d in prop.decorators),
            member=prop,
        )

    facts = _collect_class_facts(props, list(methods.values()))
    teardown_methods = _teardown_methods(methods)
    td = _teardown_facts(teardown_methods)
    dr_members, dr_locals = _destroy_ref_names(props, methods.values())
    by_member, by_local = _destroy_ref_teardowns(facts, dr_members, dr_locals)

    bindings: list[BindingRef] = collect_bindings(template) if template is not None else []
    template_reads = Counter(root for b in bindings for root in b.roots)

    for name, f in fields.items():
        f.class_read_count = facts.reads.get(name, 0)
        f.template_read_count = template_reads.get(name, 0)
        f.is_subscribed = name in facts.subscribed
        f.is_piped_source = name in facts.piped_sources
        f.passed_to_interop = name in facts.interop
        f.written = name in facts.writes

    sites: list[SubscriptionSite] = []
    for call, ancestors, member, prop_name in facts.sites:
        receiver = call.callee.object
        ops, seen_pipe = pipe_chain(receiver)
        stored_into, stored_local, store_node = _storage(call, ancestors, prop_name)
        if stored_local and not stored_into:
            stored_into = _local_store_target(member, stored_local)
        sub_start = call.callee.end - len("subscribe")
        assignments = _callback_assignments(call)
        site = SubscriptionSite(
            span=index.span(sub_start, call.end),
            receiver_text=text[receiver.start:receiver.end],
            pipe_operators=[callee_name(op) or "" for op in ops],
            cleanup=CleanupStatus(NONE),
            receiver_is_stream=_receiver_is_stream(receiver, seen_pipe, fields),
            stored_into=stored_into,
            stored_local=stored_local,
            callback_assignments=[(this_member(a.target), span_of(a)) for a in assignments],
            call=call,
            operator_calls=ops,
            assignment_nodes=assignments,
            store_node=store_node,
        )
        site.cleanup = _resolve_cleanup(site, ops, fields, td, by_member, by_local, unresolved, span_of)
        sites.append(site)
    sites.sort(key=lambda s: (s.span.start_byte, s.span.end_byte))

    decorator_span = span_of(decorator) if decorator is not None else None
    hooks = frozenset(name for name in methods if name in LIFECYCLE_HOOKS)
    return ComponentModel(
        class_name=cls.name,
        kind=kind,
        change_detection=_change_detection(decorator, text) if kind == "component" else "Default",
        lifecycle_hooks=hooks,
        fields=[fields[p.name] for p in props],
        subscriptions=sites,
        template_bindings=bindings,
        extends_unresolved_base=unresolved,
        decorator_span=decorator_span,
        class_span=span_of(cls),
        has_template=template is not None,
        script=script,
        cls=cls,
        decorator=decorator,
        teardown_reads=td.reads,
    )


def build_models(
    script: ScriptAst,
    templates: Optional[Mapping[str, TemplateAst] | TemplateAst] = None,
) -> list[ComponentModel]:
    """One model per class declaration.

    `templates` maps class names to their parsed templates; a single
    `TemplateAst` is accepted when the file declares one component.
    """
    by_name = {c.name: c for c in script.classes}
    models = []
    for cls in script.classes:
        if isinstance(templates, TemplateAst):
            template = templates
        elif templates is not None:
            template = templates.get(cls.name)
        else:
            template = None
        models.append(build_model(cls, script, template, by_name))
    return models
