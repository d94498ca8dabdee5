"""Syntax tree for the analyzed TypeScript subset.

Every node stores `start`/`end` character offsets into the host text;
`LineIndex.span` turns them into a `Span`. Nodes are never mutated after the
parser returns them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union


@dataclass(slots=True)
class Identifier:
    start: int
    end: int
    name: str


@dataclass(slots=True)
class MemberAccess:
    start: int
    end: int
    object: "Expr"
    property: str
    optional: bool = False


@dataclass(slots=True)
class Call:
    start: int
    end: int
    callee: "Expr"
    args: list["Expr"]


@dataclass(slots=True)
class ArrowFunction:
    """Arrow function, function expression or object-literal method."""

    start: int
    end: int
    params: list["Param"]
    body: Union["Expr", list["Stmt"]]
    kind: str = "arrow"

    @property
    def is_block(self) -> bool:
        return isinstance(self.body, list)


@dataclass(slots=True)
class Assignment:
    start: int
    end: int
    target: "Expr"
    op: str
    value: "Expr"


@dataclass(slots=True)
class NewExpression:
    start: int
    end: int
    callee: "Expr"
    head: str
    args: Optional[list["Expr"]]


@dataclass(slots=True)
class ObjectEntry:
    start: int
    end: int
    key: Optional[str]
    value: "Expr"
    shorthand: bool = False


@dataclass(slots=True)
class ObjectLiteral:
    start: int
    end: int
    entries: list[ObjectEntry]

    def get(self, key: str) -> Optional["Expr"]:
        for entry in self.entries:
            if entry.key == key:
                return entry.value
        return None


@dataclass(slots=True)
class ArrayLiteral:
    start: int
    end: int
    elements: list["Expr"]


@dataclass(slots=True)
class Literal:
    start: int
    end: int
    kind: str  # string | template | number | boolean | null | regex
    raw: str


@dataclass(slots=True)
class UnknownExpr:
    """Expression outside the modeled shapes; children are recovered sub-nodes."""

    start: int
    end: int
    label: str
    children: list["Node"] = field(default_factory=list)


Expr = Union[
    Identifier,
    MemberAccess,
    Call,
    ArrowFunction,
    Assignment,
    NewExpression,
    ObjectLiteral,
    ArrayLiteral,
    Literal,
    UnknownExpr,
]


@dataclass(slots=True)
class ExpressionStmt:
    start: int
    end: int
    expr: Expr


@dataclass(slots=True)
class Declarator:
    start: int
    end: int
    name: str
    type_annotation: Optional["TypeRef"]
    initializer: Optional[Expr]


@dataclass(slots=True)
class DeclarationStmt:
    start: int
    end: int
    keyword: str
    declarators: list[Declarator]


@dataclass(slots=True)
class ReturnStmt:
    start: int
    end: int
    value: Optional[Expr]


@dataclass(slots=True)
class IfStmt:
    start: int
    end: int
    test: Expr
    consequent: "Stmt"
    alternate: Optional["Stmt"]


@dataclass(slots=True)
class BlockStmt:
    start: int
    end: int
    body: list["Stmt"]


@dataclass(slots=True)
class UnknownStmt:
    start: int
    end: int
    label: str
    children: list["Node"] = field(default_factory=list)


Stmt = Union[ExpressionStmt, DeclarationStmt, ReturnStmt, IfStmt, BlockStmt, UnknownStmt]


@dataclass(slots=True)
class TypeRef:
    start: int
    end: int
    head: str
    args: list[str]


@dataclass(slots=True)
class Param:
    start: int
    end: int
    name: str
    type_annotation: Optional[TypeRef] = None
    modifiers: frozenset[str] = frozenset()
    default: Optional[Expr] = None

    @property
    def type_head(self) -> Optional[str]:
        return self.type_annotation.head if self.type_annotation else None


@dataclass(slots=True)
class ImportRecord:
    start: int
    end: int
    module: str
    # (imported name, local name); default imports use "default"
    names: list[tuple[str, str]]
    brace_open: Optional[int] = None
    brace_close: Optional[int] = None
    trailing_comma: bool = False

    @property
    def local_names(self) -> list[str]:
        return [local for _, local in self.names]


@dataclass(slots=True)
class DecoratorNode:
    start: int
    end: int
    name: str
    args: list[Expr]
    metadata: dict[str, Expr]

    @property
    def metadata_node(self) -> Optional[ObjectLiteral]:
        if self.args and isinstance(self.args[0], ObjectLiteral):
            return self.args[0]
        return None


@dataclass(slots=True)
class PropertyMember:
    start: int
    end: int
    name: str
    name_start: int
    name_end: int
    type_annotation: Optional[TypeRef]
    initializer: Optional[Expr]
    visibility: str = "public"
    is_readonly: bool = False
    is_static: bool = False
    decorators: list[DecoratorNode] = field(default_factory=list)
    is_parameter_property: bool = False


@dataclass(slots=True)
class MethodMember:
    start: int
    end: int
    name: str
    params: list[Param]
    body: list[Stmt]
    is_static: bool = False
    accessor: Optional[str] = None
    decorators: list[DecoratorNode] = field(default_factory=list)


@dataclass(slots=True)
class ClassDecl:
    start: int
    end: int
    name: str
    decorators: list[DecoratorNode]
    extends_name: Optional[str]
    properties: list[PropertyMember]
    methods: list[MethodMember]

    def method(self, name: str) -> Optional[MethodMember]:
        for m in self.methods:
            if m.name == name:
                return m
        return None

    def decorator(self, name: str) -> Optional[DecoratorNode]:
        for d in self.decorators:
            if d.name == name:
                return d
        return None


Node = Union[Expr, Stmt, ObjectEntry, Declarator]

_CHILD_FIELDS: dict[type, tuple[str, ...]] = {
    Identifier: (),
    Literal: (),
    MemberAccess: ("object",),
    Call: ("callee", "args"),
    ArrowFunction: ("body",),
    Assignment: ("target", "value"),
    NewExpression: ("callee", "args"),
    ObjectEntry: ("value",),
    ObjectLiteral: ("entries",),
    ArrayLiteral: ("elements",),
    UnknownExpr: ("children",),
    ExpressionStmt: ("expr",),
    Declarator: ("initializer",),
    DeclarationStmt: ("declarators",),
    ReturnStmt: ("value",),
    IfStmt: ("test", "consequent", "alternate"),
    BlockStmt: ("body",),
    UnknownStmt: ("children",),
}


def iter_children(node: Node) -> Iterator[Node]:
    for name in _CHILD_FIELDS[type(node)]:
        value = getattr(node, name)
        if value is None:
            continue
        if isinstance(value, list):
            yield from value
        else:
            yield value


def walk(node: Node) -> Iterator[Node]:
    """Pre-order traversal."""
    stack = [node]
    while stack:
        current = stack.pop()
        yield current
        children = list(iter_children(current))
        children.reverse()
        stack.extend(children)


def to_dict(node) -> object:
    """JSON-ready structure of a node, including offsets."""
    if isinstance(node, list):
        return [to_dict(n) for n in node]
    if isinstance(node, tuple):
        return [to_dict(n) for n in node]
    if isinstance(node, dict):
        return {k: to_dict(v) for k, v in node.items()}
    if hasattr(node, "__dataclass_fields__"):
        out: dict[str, object] = {"type": type(node).__name__}
        for name in node.__dataclass_fields__:
            out[name] = to_dict(getattr(node, name))
        return out
    if isinstance(node, frozenset):
        return sorted(node)
    return node


def shape(node) -> object:
    """Like `to_dict` but without offsets, for structural comparison."""
    if isinstance(node, (list, tuple)):
        return [shape(n) for n in node]
    if isinstance(node, dict):
        return {k: shape(v) for k, v in node.items()}
    if hasattr(node, "__dataclass_fields__"):
        out: dict[str, object] = {"type": type(node).__name__}
        for name in node.__dataclass_fields__:
            if name in ("start", "end", "name_start", "name_end", "brace_open", "brace_close"):
                continue
            out[name] = shape(getattr(node, name))
        return out
    if isinstance(node, frozenset):
        return sorted(node)
    return node
