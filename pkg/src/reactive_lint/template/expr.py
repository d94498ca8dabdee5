"""Angular binding expressions.

The grammar follows the framework's expression language closely enough for
the rules: pipes (lowest precedence, left-associative), safe navigation,
keyed access, calls, ternaries and `;` chains in event handlers. Shapes the
rules never query (operators, array and object literals, assignments) become
`BUnknown` nodes whose children keep the recovered sub-expressions.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union


@dataclass(slots=True)
class BIdentifier:
    start: int
    end: int
    name: str


@dataclass(slots=True)
class BMember:
    start: int
    end: int
    object: "BindingExpr"
    name: str
    optional: bool = False


@dataclass(slots=True)
class BCall:
    start: int
    end: int
    callee: "BindingExpr"
    args: list["BindingExpr"]


@dataclass(slots=True)
class BPipe:
    start: int
    end: int
    input: "BindingExpr"
    name: str
    args: list["BindingExpr"]


@dataclass(slots=True)
class BLiteral:
    start: int
    end: int
    kind: str  # string | number | boolean | null | undefined
    raw: str


@dataclass(slots=True)
class BUnknown:
    start: int
    end: int
    label: str
    children: list["BindingExpr"] = field(default_factory=list)


BindingExpr = Union[BIdentifier, BMember, BCall, BPipe, BLiteral, BUnknown]

_CHILDREN = {
    BIdentifier: (),
    BLiteral: (),
    BMember: ("object",),
    BCall: ("callee", "args"),
    BPipe: ("input", "args"),
    BUnknown: ("children",),
}


def iter_children(node: BindingExpr) -> Iterator[BindingExpr]:
    for name in _CHILDREN[type(node)]:
        value = getattr(node, name)
        if isinstance(value, list):
            yield from value
        else:
            yield value


def walk(node: BindingExpr) -> Iterator[BindingExpr]:
    stack = [node]
    while stack:
        current = stack.pop()
        yield current
        kids = list(iter_children(current))
        kids.reverse()
        stack.extend(kids)


def root_identifiers(node: BindingExpr) -> list[str]:
    """Component members read by the expression, in source order.

    A bare identifier resolves against the component (or a template local),
    and `this.x` names member `x` explicitly.
    """
    out: list[str] = []
    for n in walk(node):
        if isinstance(n, BIdentifier) and n.name != "this":
            out.append(n.name)
        elif isinstance(n, BMember) and isinstance(n.object, BIdentifier) and n.object.name == "this":
            out.append(n.name)
    return out


def pipe_names(node: BindingExpr) -> list[str]:
    pipes = [n for n in walk(node) if isinstance(n, BPipe)]
    pipes.sort(key=lambda n: (n.end, n.start))
    return [n.name for n in pipes]


def to_dict(node) -> object:
    if isinstance(node, list):
        return [to_dict(n) for n in node]
    if hasattr(node, "__dataclass_fields__"):
        out: dict[str, object] = {"type": type(node).__name__}
        for name in node.__dataclass_fields__:
            out[name] = to_dict(getattr(node, name))
        return out
    return node


def shape(node) -> object:
    if isinstance(node, list):
        return [shape(n) for n in node]
    if hasattr(node, "__dataclass_fields__"):
        out: dict[str, object] = {"type": type(node).__name__}
        for name in node.__dataclass_fields__:
            if name not in ("start", "end"):
                out[name] = shape(getattr(node, name))
        return out
    return node


# -- tokens ---------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<ident>[A-Za-z_$\u0080-\uffff][\w$\u0080-\uffff]*)
  | (?P<num>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<str>'(?:[^'\\]|\\.)*'?|"(?:[^"\\]|\\.)*"?|`(?:[^`\\]|\\.)*`?)
  | (?P<punct>\?\.|\?\?|\|\||&&|===|!==|==|!=|<=|>=|[-+*/%<>!=?:;,.()\[\]{}|&#@^~])
  | (?P<other>.)
    """,
    re.VERBOSE | re.DOTALL,
)

IDENT = "ident"
NUM = "num"
STR = "str"
PUNCT = "punct"
OTHER = "other"
END = "end"


@dataclass(slots=True)
class BToken:
    kind: str
    text: str
    start: int
    end: int


def lex_binding(text: str, offset: int = 0) -> list[BToken]:
    """Tokens of a binding expression; offsets shifted by `offset`."""
    out = []
    for m in _TOKEN.finditer(text):
        kind = m.lastgroup
        if kind == "ws":
            continue
        out.append(BToken(kind, m.group(), m.start() + offset, m.end() + offset))
    return out


def count_pipe_operators(text: str) -> int:
    """`|` tokens outside string literals and distinct from `||`."""
    return sum(1 for t in lex_binding(text) if t.kind == PUNCT and t.text == "|")


class BindingSyntaxError(Exception):
    pass


_BINARY = {
    "??": 1, "||": 2, "&&": 3,
    "==": 4, "!=": 4, "===": 4, "!==": 4,
    "<": 5, ">": 5, "<=": 5, ">=": 5,
    "+": 6, "-": 6, "*": 7, "/": 7, "%": 7,
}
_KEYWORD_LITERALS = {"true": "boolean", "false": "boolean", "null": "null", "undefined": "undefined"}


class _BindingParser:
    def __init__(self, tokens: list[BToken], end: int) -> None:
        self.toks = tokens + [BToken(END, "", end, end)]
        self.i = 0

    @property
    def tok(self) -> BToken:
        return self.toks[self.i]

    def at(self, text: str) -> bool:
        t = self.toks[self.i]
        return t.text == text and t.kind == PUNCT

    def expect(self, text: str) -> BToken:
        t = self.toks[self.i]
        if t.text != text or t.kind != PUNCT:
            raise BindingSyntaxError(f"expected '{text}' at offset {t.start}")
        self.i += 1
        return t

    def prev_end(self) -> int:
        return self.toks[self.i - 1].end

    # chain := pipe (';' pipe)*
    def parse_chain(self) -> BindingExpr:
        start = self.tok.start
        items = [self.parse_pipe()]
        while self.at(";"):
            self.i += 1
            if self.tok.kind == END:
                break
            items.append(self.parse_pipe())
        if len(items) == 1:
            return items[0]
        return BUnknown(start, self.prev_end(), "chain", items)

    def parse_pipe(self) -> BindingExpr:
        expr = self.parse_assignment()
        while self.at("|"):
            self.i += 1
            name_tok = self.tok
            if name_tok.kind != IDENT:
                raise BindingSyntaxError(f"pipe name expected at offset {name_tok.start}")
            self.i += 1
            args: list[BindingExpr] = []
            while self.at(":"):
                self.i += 1
                args.append(self.parse_assignment())
            expr = BPipe(expr.start, self.prev_end(), expr, name_tok.text, args)
        return expr

    def parse_assignment(self) -> BindingExpr:
        target = self.parse_conditional()
        if self.at("="):
            self.i += 1
            value = self.parse_assignment()
            return BUnknown(target.start, value.end, "assignment", [target, value])
        return target

    def parse_conditional(self) -> BindingExpr:
        test = self.parse_binary(1)
        if self.at("?"):
            self.i += 1
            yes = self.parse_pipe()
            self.expect(":")
            no = self.parse_pipe()
            return BUnknown(test.start, no.end, "conditional", [test, yes, no])
        return test

    def parse_binary(self, min_prec: int) -> BindingExpr:
        left = self.parse_unary()
        while True:
            t = self.tok
            prec = _BINARY.get(t.text) if t.kind == PUNCT else None
            if prec is None or prec < min_prec:
                return left
            self.i += 1
            right = self.parse_binary(prec + 1)
            left = BUnknown(left.start, right.end, "binary " + t.text, [left, right])

    def parse_unary(self) -> BindingExpr:
        t = self.tok
        if t.kind == PUNCT and t.text in ("!", "-", "+"):
            self.i += 1
            operand = self.parse_unary()
            return BUnknown(t.start, operand.end, "unary " + t.text, [operand])
        if t.kind == IDENT and t.text == "typeof":
            self.i += 1
            operand = self.parse_unary()
            return BUnknown(t.start, operand.end, "typeof", [operand])
        return self.parse_postfix(self.parse_primary())

    def parse_postfix(self, expr: BindingExpr) -> BindingExpr:
        while True:
            t = self.tok
            if t.kind != PUNCT:
                return expr
            if t.text in (".", "?."):
                self.i += 1
                nt = self.tok
                if t.text == "?." and nt.kind == PUNCT and nt.text in ("[", "("):
                    continue
                if nt.kind != IDENT:
                    raise BindingSyntaxError(f"member name expected at offset {nt.start}")
                self.i += 1
                expr = BMember(expr.start, nt.end, expr, nt.text, t.text == "?.")
            elif t.text == "[":
                self.i += 1
                key = self.parse_pipe()
                self.expect("]")
                expr = BUnknown(expr.start, self.prev_end(), "keyed", [expr, key])
            elif t.text == "(":
                self.i += 1
                args: list[BindingExpr] = []
                if not self.at(")"):
                    args.append(self.parse_pipe())
                    while self.at(","):
                        self.i += 1
                        args.append(self.parse_pipe())
                self.expect(")")
                expr = BCall(expr.start, self.prev_end(), expr, args)
            elif t.text == "!":
                # non-null assertion
                self.i += 1
                expr = BUnknown(expr.start, t.end, "non-null", [expr])
            else:
                return expr

    def parse_primary(self) -> BindingExpr:
        t = self.tok
        if t.kind == IDENT:
            self.i += 1
            kind = _KEYWORD_LITERALS.get(t.text)
            if kind is not None:
                return BLiteral(t.start, t.end, kind, t.text)
            return BIdentifier(t.start, t.end, t.text)
        if t.kind == NUM:
            self.i += 1
            return BLiteral(t.start, t.end, "number", t.text)
        if t.kind == STR:
            self.i += 1
            return BLiteral(t.start, t.end, "string", t.text)
        if t.kind == PUNCT:
            if t.text == "(":
                self.i += 1
                inner = self.parse_pipe()
                self.expect(")")
                return BUnknown(t.start, self.prev_end(), "parens", [inner])
            if t.text == "[":
                self.i += 1
                items: list[BindingExpr] = []
                while not self.at("]"):
                    items.append(self.parse_pipe())
                    if not self.at(","):
                        break
                    self.i += 1
                self.expect("]")
                return BUnknown(t.start, self.prev_end(), "array", items)
            if t.text == "{":
                self.i += 1
                values: list[BindingExpr] = []
                while not self.at("}"):
                    key = self.tok
                    if key.kind not in (IDENT, STR):
                        raise BindingSyntaxError(f"object key expected at offset {key.start}")
                    self.i += 1
                    if self.at(":"):
                        self.i += 1
                        values.append(self.parse_pipe())
                    else:
                        values.append(BIdentifier(key.start, key.end, key.text))
                    if not self.at(","):
                        break
                    self.i += 1
                self.expect("}")
                return BUnknown(t.start, self.prev_end(), "object", values)
        raise BindingSyntaxError(f"unexpected '{t.text}' at offset {t.start}")


def _fallback(tokens: list[BToken], start: int, end: int) -> BUnknown:
    """Best-effort facts for an expression that does not parse.

    Identifiers not preceded by a dot count as reads and every `| name`
    still yields a pipe node, so rules stay conservative.
    """
    children: list[BindingExpr] = []
    prev: Optional[BToken] = None
    k = 0
    while k < len(tokens):
        t = tokens[k]
        if t.kind == PUNCT and t.text == "|":
            nt = tokens[k + 1] if k + 1 < len(tokens) else None
            name = nt.text if nt is not None and nt.kind == IDENT else ""
            stop = nt.end if name else t.end
            children.append(BPipe(t.start, stop, BUnknown(t.start, t.start, "missing"), name, []))
            prev = nt if name else t
            k += 2 if name else 1
            continue
        if t.kind == IDENT and not (prev is not None and prev.kind == PUNCT and prev.text in (".", "?.")):
            if t.text not in _KEYWORD_LITERALS and not (prev is not None and prev.text == "|"):
                children.append(BIdentifier(t.start, t.end, t.text))
        prev = t
        k += 1
    return BUnknown(start, end, "unparsed", children)


def parse_binding(text: str, offset: int = 0, chain: bool = False) -> tuple[BindingExpr, Optional[str]]:
    """Parse `text` (located at `offset` in its unit).

    Returns the expression and an error message; on error the expression is
    a fallback `BUnknown` over the whole text.
    """
    tokens = lex_binding(text, offset)
    lead = len(text) - len(text.lstrip())
    trail = len(text.rstrip())
    start, end = offset + lead, offset + max(trail, lead)
    if not tokens:
        return BUnknown(start, end, "empty"), None
    parser = _BindingParser(tokens, end)
    try:
        expr = parser.parse_chain() if chain else parser.parse_pipe()
        if parser.tok.kind != END:
            raise BindingSyntaxError(f"unexpected '{parser.tok.text}' at offset {parser.tok.start}")
        return expr, None
    except BindingSyntaxError as exc:
        return _fallback(tokens, start, end), str(exc)
    except IndexError:
        return _fallback(tokens, start, end), "unexpected end of expression"


# -- structural directive micro-syntax -------------------------------------

_MICRO_KEYS = frozenset(("of", "else", "then", "in"))


def _split_top_level(tokens: list[BToken]) -> list[list[BToken]]:
    segments: list[list[BToken]] = [[]]
    depth = 0
    for t in tokens:
        if t.kind == PUNCT:
            if t.text in "([{":
                depth += 1
            elif t.text in ")]}":
                depth -= 1
            elif t.text in (";", ",") and depth == 0:
                segments.append([])
                continue
        segments[-1].append(t)
    return [s for s in segments if s]


def micro_syntax_fragments(text: str, offset: int = 0) -> list[tuple[int, int]]:
    """(start, end) ranges of the expressions embedded in micro-syntax.

    `let x`/`let i = index` declarations and `as name` aliases are local
    bindings, and a leading key (`of`, `else`, `trackBy:`) names an input;
    whatever remains in each segment is an expression.
    """
    ranges: list[tuple[int, int]] = []
    for seg in _split_top_level(lex_binding(text, offset)):
        k = 0
        if seg[k].kind == IDENT and seg[k].text == "let":
            k += 1
            if k < len(seg) and seg[k].kind == IDENT:
                k += 1
            if k < len(seg) and seg[k].kind == PUNCT and seg[k].text == "=":
                k += 2
        if k >= len(seg):
            continue
        if seg[k].kind == IDENT and k + 1 < len(seg):
            nxt = seg[k + 1]
            if nxt.kind == PUNCT and nxt.text == ":":
                k += 2
            elif seg[k].text in _MICRO_KEYS or (nxt.kind in (IDENT, NUM, STR) and nxt.text not in ("as",)):
                k += 1
        stop = len(seg)
        depth = 0
        for j in range(k, len(seg)):
            t = seg[j]
            if t.kind == PUNCT and t.text in "([{":
                depth += 1
            elif t.kind == PUNCT and t.text in ")]}":
                depth -= 1
            elif depth == 0 and t.kind == IDENT and t.text == "as" and j > k:
                stop = j
                break
        if k < stop:
            ranges.append((seg[k].start, seg[stop - 1].end))
    return ranges
