"""Tolerant parser for Angular component templates.

The HTML layer is deliberately forgiving: unknown tags are ordinary elements,
unclosed elements end at the nearest enclosing close tag, and stray close
tags are ignored. Binding attributes and `{{ }}` regions are handed to the
expression parser in `expr`.

All node offsets are character offsets into `unit.text`. For an inline
template `unit.host_offset` shifts them into the owning script file.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from ..catalog import INTERNAL_PARSE_ERROR
from ..diagnostics import Diagnostic, Severity
from ..spans import LineIndex, Span
from .expr import BindingExpr, micro_syntax_fragments, parse_binding, pipe_names, root_identifiers

INTERPOLATION = "interpolation"
PROPERTY_BINDING = "property_binding"
EVENT_BINDING = "event_binding"
STRUCTURAL_DIRECTIVE = "structural_directive"
RENDER_KINDS = frozenset((INTERPOLATION, PROPERTY_BINDING, STRUCTURAL_DIRECTIVE))

VOID_ELEMENTS = frozenset(
    "area base br col embed hr img input link meta param source track wbr".split()
)
RAW_TEXT_ELEMENTS = frozenset(("script", "style"))


@dataclass(slots=True)
class Attribute:
    name: str
    value: Optional[str]
    start: int
    end: int
    value_start: int = -1
    value_end: int = -1


@dataclass(slots=True)
class Interpolation:
    start: int
    end: int
    expr: BindingExpr
    kind: str = INTERPOLATION


@dataclass(slots=True)
class AttributeBinding:
    """A bound attribute; structural directives may carry several expressions."""

    start: int
    end: int
    attribute: Attribute
    kind: str
    exprs: list[BindingExpr]


@dataclass(slots=True)
class Text:
    start: int
    end: int
    interpolations: list[Interpolation] = field(default_factory=list)


@dataclass(slots=True)
class Element:
    start: int
    end: int
    tag: str
    attributes: list[Attribute]
    bindings: list[Union[AttributeBinding, Interpolation]]
    children: list["TemplateNode"]


@dataclass(slots=True)
class Comment:
    start: int
    end: int


TemplateNode = Union[Element, Text, Comment]


@dataclass
class TemplateAst:
    unit: object
    index: LineIndex
    nodes: list[TemplateNode]
    parse_errors: list[Diagnostic] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def offset(self) -> int:
        return getattr(self.unit, "host_offset", 0)

    def span(self, start: int, end: int) -> Span:
        base = self.offset
        return self.index.span(start + base, end + base)

    def source(self, start: int, end: int) -> str:
        return self.unit.text[start:end]


@dataclass(frozen=True)
class BindingRef:
    expr: BindingExpr
    kind: str
    span: Span
    roots: tuple[str, ...]
    pipes: tuple[str, ...]
    source: str = ""

    @property
    def is_render_path(self) -> bool:
        return self.kind in RENDER_KINDS


_TAG_OPEN = re.compile(r"<([A-Za-z][^\s/>]*)")
_ATTR = re.compile(
    r"""\s*([^\s"'<>/=]+)(?:\s*=\s*(?:"([^"]*)"|'([^']*)'|([^\s"'=<>`]+)))?""",
)
_TAG_CLOSE = re.compile(r"</\s*([^\s>]*)\s*>?")
_CONTROL_FLOW = re.compile(r"@(if|else|for|switch|case|default|defer|placeholder|loading|error|empty|let)\b")


class _TemplateParser:
    def __init__(self, unit) -> None:
        self.unit = unit
        self.text: str = unit.text
        index = unit.line_index() if hasattr(unit, "line_index") else LineIndex(unit.path, unit.text)
        self.ast = TemplateAst(unit, index, [])

    def error(self, start: int, end: int, message: str) -> None:
        self.ast.parse_errors.append(
            Diagnostic(INTERNAL_PARSE_ERROR, Severity.ERROR, self.ast.span(start, end), message)
        )

    def parse(self) -> TemplateAst:
        text = self.text
        n = len(text)
        root: list[TemplateNode] = []
        # stack of (element, children list)
        stack: list[Element] = []

        def children() -> list[TemplateNode]:
            return stack[-1].children if stack else root

        pos = 0
        while pos < n:
            # interpolations may contain `<`, so text runs until a `<` outside `{{ }}`
            chunk_end = self._text_end(pos, n)
            if chunk_end > pos:
                children().append(self._text(pos, chunk_end))
                pos = chunk_end
                continue
            lt = pos
            if text.startswith("<!--", lt):
                close = text.find("-->", lt + 4)
                end = n if close == -1 else close + 3
                children().append(Comment(lt, end))
                pos = end
                continue
            if text.startswith("</", lt):
                m = _TAG_CLOSE.match(text, lt)
                tag = m.group(1).lower() if m else ""
                end = m.end() if m else lt + 2
                for depth in range(len(stack) - 1, -1, -1):
                    if stack[depth].tag.lower() == tag:
                        while len(stack) > depth:
                            el = stack.pop()
                            el.end = end if len(stack) == depth else lt
                        break
                pos = end
                continue
            if text.startswith("<!", lt) or text.startswith("<?", lt):
                close = text.find(">", lt)
                end = n if close == -1 else close + 1
                children().append(Comment(lt, end))
                pos = end
                continue
            m = _TAG_OPEN.match(text, lt)
            if not m:
                children().append(self._text(lt, lt + 1))
                pos = lt + 1
                continue
            element, pos, self_closing = self._open_tag(m)
            children().append(element)
            tag = element.tag.lower()
            if self_closing or tag in VOID_ELEMENTS:
                continue
            if tag in RAW_TEXT_ELEMENTS:
                close = re.compile(r"</\s*" + re.escape(tag) + r"\s*>", re.I).search(text, pos)
                stop = n if close is None else close.start()
                if stop > pos:
                    element.children.append(Text(pos, stop))
                element.end = n if close is None else close.end()
                pos = element.end
                continue
            stack.append(element)
        for el in stack:
            el.end = n
        self.ast.nodes = root
        for m in _CONTROL_FLOW.finditer(text):
            self.ast.notes.append(
                f"control-flow block '@{m.group(1)}' at offset {m.start()} is treated as text"
            )
        return self.ast

    def _text_end(self, pos: int, n: int) -> int:
        text = self.text
        i = pos
        while i < n:
            lt = text.find("<", i)
            op = text.find("{{", i)
            if lt == -1:
                return n
            if op == -1 or lt < op:
                return lt
            close = text.find("}}", op + 2)
            if close == -1:
                return lt
            i = close + 2
        return n

    def _text(self, start: int, end: int) -> Text:
        node = Text(start, end)
        node.interpolations = self._interpolations(start, end)
        return node

    def _interpolations(self, start: int, end: int) -> list[Interpolation]:
        out: list[Interpolation] = []
        text = self.text
        pos = start
        while True:
            op = text.find("{{", pos, end)
            if op == -1:
                return out
            close = text.find("}}", op + 2, end)
            if close == -1:
                self.error(op, op + 2, "interpolation '{{' is never closed with '}}'")
                return out
            expr, err = parse_binding(text[op + 2:close], op + 2)
            if err:
                self.error(op, close + 2, f"cannot parse interpolation: {err}")
            out.append(Interpolation(op, close + 2, expr))
            pos = close + 2

    def _open_tag(self, m: re.Match) -> tuple[Element, int, bool]:
        text = self.text
        start = m.start()
        tag = m.group(1)
        pos = m.end()
        attributes: list[Attribute] = []
        self_closing = False
        n = len(text)
        while pos < n:
            while pos < n and text[pos].isspace():
                pos += 1
            if pos >= n:
                break
            if text[pos] == ">":
                pos += 1
                break
            if text.startswith("/>", pos):
                self_closing = True
                pos += 2
                break
            if text[pos] == "<":
                # malformed: a new tag starts before this one closed
                break
            am = _ATTR.match(text, pos)
            if not am or am.end() == pos:
                pos += 1
                continue
            name = am.group(1)
            value = None
            vs = ve = -1
            for g in (2, 3, 4):
                if am.group(g) is not None:
                    value = am.group(g)
                    vs, ve = am.start(g), am.end(g)
                    break
            attributes.append(Attribute(name, value, am.start(1), am.end(), vs, ve))
            pos = am.end()
        element = Element(start, pos, tag, attributes, [], [])
        element.bindings = self._bindings(attributes)
        return element, pos, self_closing

    def _bindings(self, attributes: list[Attribute]) -> list[Union[AttributeBinding, Interpolation]]:
        out: list[Union[AttributeBinding, Interpolation]] = []
        for attr in attributes:
            name = attr.name
            kind = binding_kind(name)
            if attr.value is None:
                continue
            vs = attr.value_start
            if kind is None:
                out.extend(self._interpolations(vs, attr.value_end))
                continue
            exprs: list[BindingExpr] = []
            if kind == STRUCTURAL_DIRECTIVE:
                for fs, fe in micro_syntax_fragments(attr.value, vs):
                    expr, err = parse_binding(self.text[fs:fe], fs)
                    if err:
                        self.error(fs, fe, f"cannot parse '{name}' expression: {err}")
                    exprs.append(expr)
            else:
                expr, err = parse_binding(attr.value, vs, chain=kind == EVENT_BINDING)
                if err:
                    self.error(vs, attr.value_end, f"cannot parse '{name}' expression: {err}")
                exprs.append(expr)
            out.append(AttributeBinding(attr.start, attr.end, attr, kind, exprs))
        return out


def binding_kind(name: str) -> Optional[str]:
    if name.startswith("*"):
        return STRUCTURAL_DIRECTIVE
    if name.startswith("[") and name.endswith("]"):
        return PROPERTY_BINDING
    if name.startswith("(") and name.endswith(")"):
        return EVENT_BINDING
    if name.startswith(("bind-", "bindon-")):
        return PROPERTY_BINDING
    if name.startswith("on-"):
        return EVENT_BINDING
    return None


def parse_template(unit) -> TemplateAst:
    """Parse a template unit (a `.html` file or an inline template)."""
    return _TemplateParser(unit).parse()


def iter_nodes(nodes: list[TemplateNode]) -> Iterator[TemplateNode]:
    for node in nodes:
        yield node
        if isinstance(node, Element):
            yield from iter_nodes(node.children)


def collect_bindings(ast: TemplateAst) -> list[BindingRef]:
    """Every binding in document order, with the members each one reads."""
    out: list[BindingRef] = []
    src = ast.unit.text

    def add(expr: BindingExpr, kind: str) -> None:
        out.append(
            BindingRef(
                expr,
                kind,
                ast.span(expr.start, expr.end),
                tuple(root_identifiers(expr)),
                tuple(pipe_names(expr)),
                src[expr.start:expr.end],
            )
        )

    for node in iter_nodes(ast.nodes):
        if isinstance(node, Text):
            for interp in node.interpolations:
                add(interp.expr, INTERPOLATION)
        elif isinstance(node, Element):
            for b in node.bindings:
                if isinstance(b, Interpolation):
                    add(b.expr, INTERPOLATION)
                else:
                    for expr in b.exprs:
                        add(expr, b.kind)
    return out
