from .expr import BCall, BIdentifier, BLiteral, BMember, BPipe, BUnknown, count_pipe_operators, parse_binding
from .parser import (
    EVENT_BINDING,
    INTERPOLATION,
    PROPERTY_BINDING,
    STRUCTURAL_DIRECTIVE,
    BindingRef,
    TemplateAst,
    collect_bindings,
    parse_template,
)

__all__ = [
    "BCall",
    "BIdentifier",
    "BLiteral",
    "BMember",
    "BPipe",
    "BUnknown",
    "BindingRef",
    "EVENT_BINDING",
    "INTERPOLATION",
    "PROPERTY_BINDING",
    "STRUCTURAL_DIRECTIVE",
    "TemplateAst",
    "collect_bindings",
    "count_pipe_operators",
    "parse_binding",
    "parse_template",
]
