"""Fault-tolerant recursive-descent parser for the TypeScript subset.

Only the shapes the rules query are modeled: imports, decorated classes and
their members, and a statement/expression core inside bodies. Anything else
becomes an `unknown` node covering its full source extent, and parsing
resumes at the next statement boundary.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import compress, repeat
from typing import Optional

from ..diagnostics import Diagnostic, Severity
from ..spans import LineIndex
from . import lexer
from .lexer import COMMENT, EOF, IDENTIFIER, KEYWORD, NUMBER, PUNCTUATION, REGEX, STRING, TEMPLATE
from .nodes import (
    ArrayLiteral,
    ArrowFunction,
    Assignment,
    BlockStmt,
    Call,
    ClassDecl,
    DeclarationStmt,
    Declarator,
    DecoratorNode,
    Expr,
    ExpressionStmt,
    Identifier,
    IfStmt,
    ImportRecord,
    Literal,
    MemberAccess,
    MethodMember,
    NewExpression,
    ObjectEntry,
    ObjectLiteral,
    Param,
    PropertyMember,
    ReturnStmt,
    Stmt,
    TypeRef,
    UnknownExpr,
    UnknownStmt,
)

PARSE_ERROR = "internal/parse-error"

_BINARY_PRECEDENCE = {
    "??": 1, "||": 1, "&&": 2, "|": 3, "^": 4, "&": 5,
    "==": 6, "!=": 6, "===": 6, "!==": 6,
    "<": 7, ">": 7, "<=": 7, ">=": 7, "instanceof": 7, "in": 7,
    "<<": 8, ">>": 8, ">>>": 8,
    "+": 9, "-": 9, "*": 10, "/": 10, "%": 10, "**": 11,
}
_ASSIGNMENT_OPS = frozenset(
    "= += -= *= /= %= **= <<= >>= >>>= &= |= ^= &&= ||= ??=".split()
)
_PREFIX_OPS = frozenset("! ~ + - ++ --".split())
_MEMBER_MODIFIERS = frozenset(
    "public private protected readonly static abstract override declare accessor async".split()
)
_PARAM_MODIFIERS = frozenset("public private protected readonly override".split())
_VISIBILITY = ("public", "private", "protected")
_OPENERS = {"(": ")", "[": "]", "{": "}"}
_CLOSERS = frozenset(")]}")
# token texts that can end an expression; a newline after one may end a statement
_ENDER_KINDS = frozenset((IDENTIFIER, NUMBER, STRING, TEMPLATE, REGEX))
_ENDER_PUNCT = frozenset((")", "]", "}", "++", "--"))
_ENDER_KEYWORDS = frozenset(("this", "super", "true", "false", "null", "break", "continue", "return"))
# tokens after which `{` starts an object type rather than a body
_TYPE_BRACE_PREV = frozenset(
    (None, ":", "|", "&", "<", ",", "=>", "(", "[", "keyof", "typeof", "readonly", "extends", "?", "=")
)
_TYPE_TOKENS_PUNCT = frozenset(
    (",", ".", "[", "]", "|", "&", "{", "}", ":", ";", "?", "(", ")", "=>", "<", ">", ">>", ">>>", "...", "-", "=")
)


class _Fail(Exception):
    pass


@dataclass
class ScriptAst:
    unit: object
    index: LineIndex
    imports: list[ImportRecord] = field(default_factory=list)
    classes: list[ClassDecl] = field(default_factory=list)
    statements: list[Stmt] = field(default_factory=list)
    parse_errors: list[Diagnostic] = field(default_factory=list)

    @property
    def path(self) -> str:
        return self.index.path

    def text_of(self, node) -> str:
        return self.index.text[node.start:node.end]

    def imported_names(self) -> set[str]:
        return {local for imp in self.imports for _, local in imp.names}


class _Parser:
    def __init__(self, text: str, index: LineIndex) -> None:
        self.text = text
        self.index = index
        kinds, starts, ends = lexer.lex(text)
        keep = list(map(COMMENT.__ne__, kinds))
        K = list(compress(kinds, keep))
        S = list(compress(starts, keep))
        E = list(compress(ends, keep))
        n = len(text)
        # NL[i]: a line break separates token i from its predecessor
        NL = list(map(text.count, repeat("\n"), [0] + E, S + [n]))
        NL[-1] = 1
        K.append(EOF)
        S.append(n)
        E.append(n)
        self.K, self.S, self.E, self.NL = K, S, E, NL
        self.T = list(map(text.__getitem__, map(slice, S, E)))
        self.T[-1] = ""
        self.errors: list[Diagnostic] = []
        self.M = self._match_brackets()
        self.i = 0

    # -- infrastructure ---------------------------------------------------

    def _match_brackets(self) -> list[int]:
        K, T = self.K, self.T
        match = [-1] * len(T)
        stack: list[int] = []
        for i, (k, t) in enumerate(zip(K, T)):
            if k != PUNCTUATION:
                continue
            if t in _OPENERS:
                stack.append(i)
            elif t in _CLOSERS:
                if stack and _OPENERS[T[stack[-1]]] == t:
                    j = stack.pop()
                    match[i] = j
                    match[j] = i
                else:
                    self._error(i, f"unmatched '{t}'")
        for j in stack:
            self._error(j, f"unbalanced '{T[j]}' is never closed before end of file")
        return match

    def _error(self, i: int, message: str) -> None:
        self.errors.append(
            Diagnostic(
                PARSE_ERROR,
                Severity.ERROR,
                self.index.span(self.S[i], self.E[i]),
                message,
            )
        )

    def _close_of(self, i: int) -> int:
        """Index of the token closing the bracket at `i` (EOF if unbalanced)."""
        j = self.M[i]
        return j if j >= 0 else len(self.T) - 1

    def _expect(self, text: str) -> None:
        if self.T[self.i] != text or self.K[self.i] not in (PUNCTUATION, KEYWORD, IDENTIFIER):
            raise _Fail
        self.i += 1

    def _end(self) -> int:
        """End offset of the last consumed token."""
        return self.E[self.i - 1]

    def _is_name(self, i: int) -> bool:
        return self.K[i] in (IDENTIFIER, KEYWORD)

    def _can_end(self, i: int) -> bool:
        k = self.K[i]
        if k in _ENDER_KINDS:
            return True
        if k == PUNCTUATION:
            return self.T[i] in _ENDER_PUNCT
        return k == KEYWORD and self.T[i] in _ENDER_KEYWORDS

    def _at_statement_end(self) -> bool:
        i = self.i
        t = self.T[i]
        return t == ";" or t == "}" or self.K[i] == EOF or self.NL[i]

    def _finish_statement(self) -> None:
        if self.T[self.i] == ";":
            self.i += 1
        elif not (self.T[self.i] == "}" or self.K[self.i] == EOF or self.NL[self.i]):
            raise _Fail

    def _skip_statement(self, i: int, limit: int) -> tuple[int, list[tuple[int, int]]]:
        """Find where an unparseable statement starting at token `i` ends.

        Returns the index after the statement and the braced blocks that
        look like bodies (for recovering nested statements).
        """
        T, K, NL, M = self.T, self.K, self.NL, self.M
        blocks: list[tuple[int, int]] = []
        j = i
        while j < limit:
            t = T[j]
            k = K[j]
            if k == EOF:
                break
            if j > i and NL[j] and self._can_end(j - 1) and self._starts_statement(j):
                break
            if k == PUNCTUATION:
                if t == ";":
                    j += 1
                    break
                if t in _OPENERS:
                    close = M[j]
                    if close < 0:
                        if t == "{":
                            blocks.append((j, limit))
                        j = limit
                        break
                    if t == "{" and j > i and (
                        T[j - 1] in (")", "=>") or T[j - 1] in ("else", "try", "finally", "do")
                    ):
                        blocks.append((j, close))
                    j = close + 1
                    if t == "{" and NL[j] and T[j] not in ("else", "catch", "finally", "while", ".", ")", ",", "?."):
                        break
                    continue
                if t in _CLOSERS:
                    if j == i:
                        j += 1
                    break
            j += 1
        if j == i:
            j = i + 1
        return min(j, limit) if limit > i else j, blocks

    def _starts_statement(self, j: int) -> bool:
        k = self.K[j]
        t = self.T[j]
        if k in (IDENTIFIER, KEYWORD):
            return t not in ("in", "instanceof", "as", "satisfies", "extends", "implements", "of")
        return t in ("@", "{", "}", ";", "[", "(") or k in (STRING, TEMPLATE, NUMBER)

    def _unknown_statement(self, start_i: int, limit: int, label: str = "unknown") -> UnknownStmt:
        end_i, blocks = self._skip_statement(start_i, limit)
        children: list = []
        for open_i, close_i in blocks:
            self.i = open_i + 1
            children.append(
                BlockStmt(self.S[open_i], self.E[close_i] if close_i < len(self.E) else len(self.text),
                          self._statements_until(close_i))
            )
        self.i = end_i
        return UnknownStmt(self.S[start_i], self.E[end_i - 1], label, children)

    # -- types ------------------------------------------------------------

    def _skip_type(self, i: int, stop_at_arrow: bool = False) -> int:
        T, K, NL, M = self.T, self.K, self.NL, self.M
        angle = 0
        prev: Optional[str] = None
        start = i
        while True:
            k = K[i]
            t = T[i]
            if k == EOF:
                break
            if i > start and NL[i] and angle == 0 and prev is not None and prev not in (
                "|", "&", ":", "<", ",", "=>", ".", "?", "keyof", "typeof", "readonly", "extends", "="
            ) and t not in ("|", "&", ".", "[", "<", "extends", "?", "=>"):
                break
            if k == PUNCTUATION:
                if t in _OPENERS:
                    if t == "{" and prev not in _TYPE_BRACE_PREV:
                        break
                    close = M[i]
                    if close < 0:
                        return len(T) - 1
                    i = close + 1
                    prev = _OPENERS[t]
                    continue
                if t == "<":
                    angle += 1
                elif t in (">", ">>", ">>>"):
                    if angle == 0:
                        break
                    angle -= len(t)
                    if angle < 0:
                        angle = 0
                elif t == "=>":
                    if angle == 0 and stop_at_arrow:
                        break
                elif angle == 0 and t in (";", ",", ")", "]", "}", "=", "{", "&&", "||", "+", "*"):
                    break
                elif angle == 0 and t not in _TYPE_TOKENS_PUNCT:
                    break
            elif angle == 0 and k == IDENTIFIER and t in ("as", "satisfies") and prev is not None:
                break
            prev = t
            i += 1
        return i

    def _type_ref(self, a: int, b: int) -> TypeRef:
        T, K = self.T, self.K
        i = a
        while i < b and T[i] in ("|", "&", "readonly"):
            i += 1
        head = ""
        args: list[str] = []
        if i < b and K[i] in (IDENTIFIER, KEYWORD):
            head = T[i]
            i += 1
            while i + 1 < b and T[i] == "." and K[i + 1] in (IDENTIFIER, KEYWORD):
                head += "." + T[i + 1]
                i += 2
            if i < b and T[i] == "<":
                depth = 0
                arg_start = i + 1
                j = i
                while j < b:
                    t = T[j]
                    if t in _OPENERS and K[j] == PUNCTUATION:
                        j = self.M[j] if self.M[j] >= 0 else b
                    elif t == "<":
                        depth += 1
                    elif t in (">", ">>", ">>>"):
                        depth -= len(t)
                        if depth <= 0:
                            if arg_start < j:
                                args.append(self.text[self.S[arg_start]:self.E[j - 1]])
                            i = j + 1
                            break
                    elif t == "," and depth == 1:
                        args.append(self.text[self.S[arg_start]:self.E[j - 1]])
                        arg_start = j + 1
                    j += 1
                else:
                    i = b
            if i < b and T[i] == "[" and i + 1 < b and T[i + 1] == "]":
                args = [self.text[self.S[a]:self.E[i - 1]]]
                head = "Array"
        elif i < b:
            head = T[i]
        return TypeRef(self.S[a], self.E[b - 1] if b > a else self.S[a], head, args)

    def _try_type_args(self, i: int) -> int:
        """If token `i` opens a type-argument list, return the index after it."""
        T, K, M = self.T, self.K, self.M
        depth = 0
        j = i
        limit = min(len(T) - 1, i + 256)
        while j < limit:
            t = T[j]
            k = K[j]
            if k == PUNCTUATION:
                if t == "<":
                    depth += 1
                elif t in (">", ">>", ">>>"):
                    depth -= len(t)
                    if depth == 0:
                        return j + 1
                    if depth < 0:
                        return -1
                elif t in _OPENERS:
                    close = M[j]
                    if close < 0:
                        return -1
                    j = close
                elif t not in _TYPE_TOKENS_PUNCT or t in (";", "="):
                    return -1
            elif k not in (IDENTIFIER, KEYWORD, STRING, NUMBER, TEMPLATE):
                return -1
            j += 1
        return -1

    # -- expressions ------------------------------------------------------

    def parse_expression(self) -> Expr:
        start = self.S[self.i]
        first = self.parse_assignment()
        if self.T[self.i] != "," or self.K[self.i] != PUNCTUATION:
            return first
        items = [first]
        while self.T[self.i] == "," and self.K[self.i] == PUNCTUATION:
            self.i += 1
            items.append(self.parse_assignment())
        return UnknownExpr(start, self._end(), "sequence", items)

    def _is_arrow_parens(self, i: int) -> bool:
        close = self.M[i]
        if close < 0:
            return False
        nxt = self.T[close + 1]
        if nxt == "=>":
            return not self.NL[close + 1]
        if nxt == ":":
            j = self._skip_type(close + 2, stop_at_arrow=True)
            return self.T[j] == "=>"
        return False

    def parse_assignment(self) -> Expr:
        i = self.i
        T, K = self.T, self.K
        k = K[i]
        t = T[i]
        if k == IDENTIFIER:
            if T[i + 1] == "=>" and K[i + 1] == PUNCTUATION:
                return self._arrow(i, is_async=False)
            if t == "async" and not self.NL[i + 1]:
                if K[i + 1] == IDENTIFIER and T[i + 2] == "=>":
                    return self._arrow(i + 1, is_async=True)
                if T[i + 1] == "(" and self._is_arrow_parens(i + 1):
                    return self._arrow(i + 1, is_async=True)
        elif t == "(" and k == PUNCTUATION and self._is_arrow_parens(i):
            return self._arrow(i, is_async=False)
        elif t == "<" and k == PUNCTUATION:
            j = self._try_type_args(i)
            if j > 0 and T[j] == "(" and self._is_arrow_parens(j):
                return self._arrow(j, is_async=False, start_i=i)
        start = self.S[i]
        left = self.parse_conditional()
        op = T[self.i]
        if op in _ASSIGNMENT_OPS and K[self.i] == PUNCTUATION:
            self.i += 1
            value = self.parse_assignment()
            return Assignment(start, self._end(), left, op, value)
        return left

    def _arrow(self, i: int, is_async: bool, start_i: Optional[int] = None) -> ArrowFunction:
        start = self.S[start_i if start_i is not None else (i - 1 if is_async else i)]
        if self.T[i] == "(":
            self.i = i
            params = self._params()
            if self.T[self.i] == ":":
                self.i = self._skip_type(self.i + 1, stop_at_arrow=True)
        else:
            params = [Param(self.S[i], self.E[i], self.T[i])]
            self.i = i + 1
        self._expect("=>")
        if self.T[self.i] == "{" and self.K[self.i] == PUNCTUATION:
            body: object = self._block()
        else:
            body = self.parse_assignment()
        return ArrowFunction(start, self._end(), params, body, "arrow")

    def parse_conditional(self) -> Expr:
        start = self.S[self.i]
        test = self.parse_binary(0)
        if self.T[self.i] == "?" and self.K[self.i] == PUNCTUATION:
            self.i += 1
            consequent = self.parse_assignment()
            self._expect(":")
            alternate = self.parse_assignment()
            return UnknownExpr(start, self._end(), "conditional", [test, consequent, alternate])
        return test

    def parse_binary(self, min_prec: int) -> Expr:
        start = self.S[self.i]
        left = self.parse_unary()
        T, K = self.T, self.K
        while True:
            i = self.i
            t = T[i]
            k = K[i]
            if k == IDENTIFIER:
                if t in ("as", "satisfies") and not self.NL[i]:
                    if T[i + 1] == "const":
                        self.i = i + 2
                    else:
                        self.i = self._skip_type(i + 1)
                    continue
                break
            if k != PUNCTUATION and k != KEYWORD:
                break
            prec = _BINARY_PRECEDENCE.get(t)
            if prec is None or prec <= min_prec:
                break
            self.i += 1
            right = self.parse_binary(prec)
            left = UnknownExpr(start, self._end(), "binary:" + t, [left, right])
        return left

    def parse_unary(self) -> Expr:
        i = self.i
        t = self.T[i]
        k = self.K[i]
        if (k == PUNCTUATION and t in _PREFIX_OPS) or (
            k == KEYWORD and t in ("typeof", "void", "delete")
        ) or (
            k == IDENTIFIER and t == "await" and not self.NL[i + 1]
            and self.T[i + 1] not in (";", ")", ",", "]", "}", "=", ".", ":")
        ):
            start = self.S[i]
            self.i += 1
            operand = self.parse_unary()
            return UnknownExpr(start, self._end(), "unary:" + t, [operand])
        if k == PUNCTUATION and t == "<":
            j = self._try_type_args(i)
            if j < 0:
                raise _Fail
            self.i = j
            return self.parse_unary()
        # a chain on a parenthesized primary starts at the opening paren
        start = self.S[i]
        return self.parse_postfix(self.parse_primary(), start)

    def parse_postfix(self, expr: Expr, start: Optional[int] = None) -> Expr:
        T, K, S, E = self.T, self.K, self.S, self.E
        if start is None:
            start = expr.start
        while True:
            i = self.i
            t = T[i]
            k = K[i]
            if k == PUNCTUATION:
                if t == ".":
                    if not self._is_name(i + 1):
                        raise _Fail
                    expr = MemberAccess(start, E[i + 1], expr, T[i + 1])
                    self.i = i + 2
                    continue
                if t == "?.":
                    nt = T[i + 1]
                    if nt == "(":
                        self.i = i + 1
                        args = self._args()
                        expr = Call(start, self._end(), expr, args)
                    elif nt == "[":
                        self.i = i + 2
                        index = self.parse_expression()
                        self._expect("]")
                        expr = UnknownExpr(start, self._end(), "index", [expr, index])
                    elif self._is_name(i + 1):
                        expr = MemberAccess(start, E[i + 1], expr, nt, optional=True)
                        self.i = i + 2
                    else:
                        raise _Fail
                    continue
                if t == "(":
                    args = self._args()
                    expr = Call(start, self._end(), expr, args)
                    continue
                if t == "[":
                    self.i = i + 1
                    index = self.parse_expression()
                    self._expect("]")
                    expr = UnknownExpr(start, self._end(), "index", [expr, index])
                    continue
                if t == "!" and S[i] == E[i - 1]:
                    self.i = i + 1
                    continue
                if t == "<" and not self.NL[i]:
                    j = self._try_type_args(i)
                    if j > 0 and T[j] == "(" and K[j] == PUNCTUATION:
                        self.i = j
                        continue
                    break
                if t in ("++", "--") and not self.NL[i]:
                    self.i = i + 1
                    expr = UnknownExpr(start, E[i], "postfix:" + t, [expr])
                    continue
                break
            if k == TEMPLATE and not self.NL[i]:
                self.i = i + 1
                expr = UnknownExpr(start, E[i], "tagged-template", [expr])
                continue
            break
        return expr

    def parse_primary(self) -> Expr:
        i = self.i
        k = self.K[i]
        t = self.T[i]
        s, e = self.S[i], self.E[i]
        if k == IDENTIFIER:
            self.i = i + 1
            return Identifier(s, e, t)
        if k == KEYWORD:
            if t in ("this", "super", "import"):
                self.i = i + 1
                return Identifier(s, e, t)
            if t in ("true", "false"):
                self.i = i + 1
                return Literal(s, e, "boolean", t)
            if t == "null":
                self.i = i + 1
                return Literal(s, e, "null", t)
            if t == "new":
                return self._new()
            if t == "function":
                return self._function_expression()
            if t == "class":
                end_i, _ = self._skip_statement(i, len(self.T) - 1)
                self.i = end_i
                return UnknownExpr(s, self._end(), "class-expression")
            raise _Fail
        if k == STRING:
            self.i = i + 1
            return Literal(s, e, "string", t)
        if k == NUMBER:
            self.i = i + 1
            return Literal(s, e, "number", t)
        if k == TEMPLATE:
            self.i = i + 1
            return Literal(s, e, "template", t)
        if k == REGEX:
            self.i = i + 1
            return Literal(s, e, "regex", t)
        if k == PUNCTUATION:
            if t == "(":
                close = self.M[i]
                if close < 0:
                    raise _Fail
                self.i = i + 1
                inner = self.parse_expression()
                if self.i != close:
                    raise _Fail
                self.i = close + 1
                return inner
            if t == "[":
                return self._array()
            if t == "{":
                return self._object()
            if t == "...":
                self.i = i + 1
                arg = self.parse_assignment()
                return UnknownExpr(s, self._end(), "spread", [arg])
        raise _Fail

    def _new(self) -> Expr:
        i = self.i
        start = self.S[i]
        self.i = i + 1
        if self.T[self.i] == ".":
            # new.target
            self.i += 2
            return UnknownExpr(start, self._end(), "new.target")
        callee: Expr = self.parse_primary()
        while self.T[self.i] == "." and self._is_name(self.i + 1):
            callee = MemberAccess(callee.start, self.E[self.i + 1], callee, self.T[self.i + 1])
            self.i += 2
        if isinstance(callee, Identifier):
            head = callee.name
        elif isinstance(callee, MemberAccess):
            head = callee.property
        else:
            head = ""
        if self.T[self.i] == "<":
            j = self._try_type_args(self.i)
            if j > 0:
                self.i = j
        args = None
        if self.T[self.i] == "(":
            args = self._args()
        return NewExpression(start, self._end(), callee, head, args)

    def _function_expression(self) -> Expr:
        start = self.S[self.i]
        self.i += 1
        if self.T[self.i] == "*":
            self.i += 1
        if self._is_name(self.i) and self.T[self.i] != "(":
            self.i += 1
        if self.T[self.i] == "<":
            j = self._try_type_args(self.i)
            if j < 0:
                raise _Fail
            self.i = j
        params = self._params()
        if self.T[self.i] == ":":
            self.i = self._skip_type(self.i + 1)
        if self.T[self.i] != "{":
            raise _Fail
        body = self._block()
        return ArrowFunction(start, self._end(), params, body, "function")

    def _args(self) -> list[Expr]:
        i = self.i
        if self.T[i] != "(":
            raise _Fail
        close = self.M[i]
        if close < 0:
            raise _Fail
        self.i = i + 1
        args: list[Expr] = []
        while self.i < close:
            args.append(self.parse_assignment())
            if self.T[self.i] == "," and self.K[self.i] == PUNCTUATION:
                self.i += 1
            elif self.i != close:
                raise _Fail
        self.i = close + 1
        return args

    def _array(self) -> Expr:
        i = self.i
        close = self.M[i]
        if close < 0:
            raise _Fail
        self.i = i + 1
        elements: list[Expr] = []
        while self.i < close:
            if self.T[self.i] == ",":
                self.i += 1
                continue
            elements.append(self.parse_assignment())
            if self.T[self.i] == ",":
                self.i += 1
            elif self.i != close:
                raise _Fail
        self.i = close + 1
        return ArrayLiteral(self.S[i], self.E[close], elements)

    def _property_key(self) -> tuple[str, int]:
        i = self.i
        k = self.K[i]
        t = self.T[i]
        if k in (IDENTIFIER, KEYWORD, NUMBER):
            self.i = i + 1
            return t, i
        if k == STRING:
            self.i = i + 1
            return t[1:-1], i
        if t == "[" and k == PUNCTUATION:
            close = self.M[i]
            if close < 0:
                raise _Fail
            self.i = close + 1
            return self.text[self.S[i]:self.E[close]], i
        raise _Fail

    def _object(self) -> Expr:
        i = self.i
        close = self.M[i]
        if close < 0:
            raise _Fail
        self.i = i + 1
        T, K = self.T, self.K
        entries: list[ObjectEntry] = []
        while self.i < close:
            j = self.i
            estart = self.S[j]
            if T[j] == "," and K[j] == PUNCTUATION:
                self.i += 1
                continue
            if T[j] == "..." and K[j] == PUNCTUATION:
                self.i = j + 1
                value = self.parse_assignment()
                entries.append(ObjectEntry(estart, self._end(), None, value))
            else:
                if T[j] in ("get", "set", "async") and K[j] == IDENTIFIER and T[j + 1] not in (
                    ",", ":", "(", "}", "="
                ):
                    self.i = j + 1
                if T[self.i] == "*":
                    self.i += 1
                key, key_i = self._property_key()
                nt = T[self.i]
                if nt == ":":
                    self.i += 1
                    value = self.parse_assignment()
                    entries.append(ObjectEntry(estart, self._end(), key, value))
                elif nt in ("(", "<"):
                    mstart = self.S[key_i]
                    if nt == "<":
                        jj = self._try_type_args(self.i)
                        if jj < 0:
                            raise _Fail
                        self.i = jj
                    params = self._params()
                    if T[self.i] == ":":
                        self.i = self._skip_type(self.i + 1)
                    if T[self.i] != "{":
                        raise _Fail
                    body = self._block()
                    fn = ArrowFunction(mstart, self._end(), params, body, "method")
                    entries.append(ObjectEntry(estart, self._end(), key, fn))
                elif nt in (",", "}") or (nt == "=" and K[key_i] == IDENTIFIER):
                    ident = Identifier(self.S[key_i], self.E[key_i], key)
                    if nt == "=":
                        self.i += 1
                        default = self.parse_assignment()
                        ident = Assignment(ident.start, self._end(), ident, "=", default)  # type: ignore[assignment]
                    entries.append(ObjectEntry(estart, self._end(), key, ident, shorthand=True))
                else:
                    raise _Fail
            if T[self.i] == "," and K[self.i] == PUNCTUATION:
                self.i += 1
            elif self.i != close:
                raise _Fail
        self.i = close + 1
        return ObjectLiteral(self.S[i], self.E[close], entries)

    # -- parameters -------------------------------------------------------

    def _params(self) -> list[Param]:
        i = self.i
        if self.T[i] != "(":
            raise _Fail
        close = self.M[i]
        if close < 0:
            raise _Fail
        T, K = self.T, self.K
        params: list[Param] = []
        self.i = i + 1
        while self.i < close:
            if T[self.i] == ",":
                self.i += 1
                continue
            pstart = self.S[self.i]
            while T[self.i] == "@":
                self._decorator()
            mods = set()
            while (
                T[self.i] in _PARAM_MODIFIERS
                and K[self.i] == IDENTIFIER
                and (self._is_name(self.i + 1) or T[self.i + 1] in ("{", "["))
            ):
                mods.add(T[self.i])
                self.i += 1
            if T[self.i] == "...":
                self.i += 1
            j = self.i
            if T[j] in ("{", "[") and K[j] == PUNCTUATION:
                pclose = self.M[j]
                if pclose < 0:
                    raise _Fail
                name = self.text[self.S[j]:self.E[pclose]]
                self.i = pclose + 1
            elif self._is_name(j):
                name = T[j]
                self.i = j + 1
            else:
                raise _Fail
            if T[self.i] in ("?", "!"):
                self.i += 1
            type_ref = None
            if T[self.i] == ":":
                a = self.i + 1
                self.i = self._skip_type(a)
                type_ref = self._type_ref(a, self.i)
            default = None
            if T[self.i] == "=":
                self.i += 1
                default = self.parse_assignment()
            params.append(Param(pstart, self._end(), name, type_ref, frozenset(mods), default))
            if T[self.i] == ",":
                self.i += 1
            elif self.i != close:
                raise _Fail
        self.i = close + 1
        return params

    # -- statements -------------------------------------------------------

    def _block(self) -> list[Stmt]:
        i = self.i
        close = self._close_of(i)
        self.i = i + 1
        body = self._statements_until(close)
        self.i = close + 1 if close < len(self.T) - 1 else close
        return body

    def _statements_until(self, close: int) -> list[Stmt]:
        body: list[Stmt] = []
        while self.i < close:
            if self.T[self.i] == ";":
                self.i += 1
                continue
            stmt = self.parse_statement(close)
            if stmt is not None:
                body.append(stmt)
        return body

    def parse_statement(self, limit: int) -> Optional[Stmt]:
        start_i = self.i
        try:
            stmt = self._statement(limit)
            if self.i > limit:
                raise _Fail
            return stmt
        except _Fail:
            self.i = start_i
            return self._unknown_statement(start_i, limit)

    def _statement(self, limit: int) -> Optional[Stmt]:
        i = self.i
        t = self.T[i]
        k = self.K[i]
        start = self.S[i]
        if k == KEYWORD or k == IDENTIFIER:
            if t in ("const", "let", "var") and (self._is_name(i + 1) or self.T[i + 1] in ("{", "[")):
                if t == "const" and self.T[i + 1] == "enum":
                    raise _Fail
                return self._declaration()
            if t == "return" and k == KEYWORD:
                self.i = i + 1
                value = None
                if not self._at_statement_end():
                    value = self.parse_expression()
                self._finish_statement()
                return ReturnStmt(start, self._end(), value)
            if t == "if" and k == KEYWORD:
                self.i = i + 1
                if self.T[self.i] != "(":
                    raise _Fail
                close = self.M[self.i]
                self.i += 1
                test = self.parse_expression()
                if self.i != close:
                    raise _Fail
                self.i = close + 1
                consequent = self._sub_statement(limit)
                alternate = None
                if self.T[self.i] == "else" and self.K[self.i] == KEYWORD:
                    self.i += 1
                    alternate = self._sub_statement(limit)
                return IfStmt(start, self._end(), test, consequent, alternate)
            if k == KEYWORD and t in ("for", "while", "with"):
                self.i = i + 1
                if self.T[self.i] == "await":
                    self.i += 1
                if self.T[self.i] != "(" or self.M[self.i] < 0:
                    raise _Fail
                self.i = self.M[self.i] + 1
                body = self._sub_statement(limit)
                return UnknownStmt(start, self._end(), t, [body])
            if t == "do" and k == KEYWORD:
                self.i = i + 1
                body = self._sub_statement(limit)
                self._expect("while")
                if self.T[self.i] != "(" or self.M[self.i] < 0:
                    raise _Fail
                self.i = self.M[self.i] + 1
                if self.T[self.i] == ";":
                    self.i += 1
                return UnknownStmt(start, self._end(), "do", [body])
            if t == "try" and k == KEYWORD:
                self.i = i + 1
                children: list = [self._braced_block()]
                if self.T[self.i] == "catch":
                    self.i += 1
                    if self.T[self.i] == "(":
                        self.i = self._close_of(self.i) + 1
                    children.append(self._braced_block())
                if self.T[self.i] == "finally":
                    self.i += 1
                    children.append(self._braced_block())
                return UnknownStmt(start, self._end(), "try", children)
            if t == "switch" and k == KEYWORD:
                self.i = i + 1
                if self.T[self.i] != "(" or self.M[self.i] < 0:
                    raise _Fail
                self.i = self.M[self.i] + 1
                if self.T[self.i] != "{":
                    raise _Fail
                open_i = self.i
                close = self._close_of(open_i)
                self.i = open_i + 1
                body = self._statements_until(close)
                self.i = close + 1
                return UnknownStmt(start, self._end(), "switch", [BlockStmt(self.S[open_i], self._end(), body)])
            if t in ("case", "default") and k == KEYWORD:
                self.i = i + 1
                depth_guard = self.i
                while self.T[self.i] != ":" and self.i < limit:
                    if self.T[self.i] in _OPENERS and self.M[self.i] > 0:
                        self.i = self.M[self.i]
                    self.i += 1
                if self.i >= limit or self.i - depth_guard > 512:
                    raise _Fail
                self.i += 1
                return UnknownStmt(start, self._end(), "case")
            if t == "throw" and k == KEYWORD:
                self.i = i + 1
                value = self.parse_expression()
                self._finish_statement()
                return UnknownStmt(start, self._end(), "throw", [value])
            if t in ("break", "continue") and k == KEYWORD:
                self.i = i + 1
                if self.K[self.i] == IDENTIFIER and not self.NL[self.i]:
                    self.i += 1
                self._finish_statement()
                return UnknownStmt(start, self._end(), t)
            if t == "function" and k == KEYWORD:
                fn = self._function_expression()
                return UnknownStmt(start, self._end(), "function", [fn])
            if k == IDENTIFIER and self.T[i + 1] == ":" and self.K[i + 1] == PUNCTUATION:
                # label
                self.i = i + 2
                return UnknownStmt(start, self._end(), "label")
            if t == "debugger":
                self.i = i + 1
                self._finish_statement()
                return UnknownStmt(start, self._end(), "debugger")
        if t == "{" and k == PUNCTUATION:
            return BlockStmt(start, self.E[self._close_of(i)], self._block())
        if k == KEYWORD and t in ("class", "enum", "import", "export", "interface"):
            if not (t == "import" and self.T[i + 1] in ("(", ".")):
                raise _Fail
        if k == IDENTIFIER and t in ("interface", "type", "namespace", "module", "declare", "abstract") and (
            self._is_name(i + 1) and not self.NL[i + 1]
        ):
            raise _Fail
        expr = self.parse_expression()
        self._finish_statement()
        return ExpressionStmt(start, self._end(), expr)

    def _sub_statement(self, limit: int) -> Stmt:
        if self.T[self.i] == ";":
            s = self.S[self.i]
            self.i += 1
            return BlockStmt(s, self._end(), [])
        stmt = self.parse_statement(limit)
        if stmt is None:
            raise _Fail
        return stmt

    def _braced_block(self) -> BlockStmt:
        i = self.i
        if self.T[i] != "{":
            raise _Fail
        return BlockStmt(self.S[i], self.E[self._close_of(i)], self._block())

    def _declaration(self) -> DeclarationStmt:
        i = self.i
        start = self.S[i]
        keyword = self.T[i]
        self.i = i + 1
        T = self.T
        declarators: list[Declarator] = []
        while True:
            j = self.i
            dstart = self.S[j]
            if T[j] in ("{", "[") and self.K[j] == PUNCTUATION:
                close = self.M[j]
                if close < 0:
                    raise _Fail
                name = self.text[self.S[j]:self.E[close]]
                self.i = close + 1
            elif self._is_name(j):
                name = T[j]
                self.i = j + 1
            else:
                raise _Fail
            if T[self.i] == "!":
                self.i += 1
            type_ref = None
            if T[self.i] == ":":
                a = self.i + 1
                self.i = self._skip_type(a)
                type_ref = self._type_ref(a, self.i)
            init = None
            if T[self.i] == "=":
                self.i += 1
                init = self.parse_assignment()
            declarators.append(Declarator(dstart, self._end(), name, type_ref, init))
            if T[self.i] == "," and self.K[self.i] == PUNCTUATION:
                self.i += 1
                continue
            break
        self._finish_statement()
        return DeclarationStmt(start, self._end(), keyword, declarators)

    # -- declarations -----------------------------------------------------

    def _decorator(self) -> DecoratorNode:
        i = self.i
        start = self.S[i]
        self.i = i + 1
        if not self._is_name(self.i):
            raise _Fail
        name = self.T[self.i]
        self.i += 1
        while self.T[self.i] == "." and self._is_name(self.i + 1):
            name += "." + self.T[self.i + 1]
            self.i += 2
        args: list[Expr] = []
        if self.T[self.i] == "(" and self.K[self.i] == PUNCTUATION:
            args = self._args()
        metadata: dict[str, Expr] = {}
        if args and isinstance(args[0], ObjectLiteral):
            for entry in args[0].entries:
                if entry.key is not None and entry.key not in metadata:
                    metadata[entry.key] = entry.value
        return DecoratorNode(start, self._end(), name, args, metadata)

    def _import(self) -> ImportRecord:
        i = self.i
        start = self.S[i]
        self.i = i + 1
        T, K = self.T, self.K
        names: list[tuple[str, str]] = []
        brace_open = brace_close = None
        trailing = False
        if T[self.i] == "type" and T[self.i + 1] != "from" and T[self.i + 1] != ",":
            self.i += 1
        if K[self.i] == STRING:
            module = T[self.i][1:-1]
            self.i += 1
            self._finish_statement()
            return ImportRecord(start, self._end(), module, names)
        while True:
            t = T[self.i]
            if K[self.i] == IDENTIFIER and t != "from":
                names.append(("default", t))
                self.i += 1
            elif t == "*":
                self.i += 1
                self._expect("as")
                names.append(("*", T[self.i]))
                self.i += 1
            elif t == "{":
                close = self.M[self.i]
                if close < 0:
                    raise _Fail
                brace_open = self.S[self.i]
                brace_close = self.S[close]
                j = self.i + 1
                while j < close:
                    if T[j] == ",":
                        j += 1
                        continue
                    if T[j] == "type" and self._is_name(j + 1) and T[j + 1] != "as":
                        j += 1
                    imported = T[j]
                    local = imported
                    j += 1
                    if T[j] == "as":
                        local = T[j + 1]
                        j += 2
                    names.append((imported, local))
                trailing = T[close - 1] == ","
                self.i = close + 1
            else:
                raise _Fail
            if T[self.i] == ",":
                self.i += 1
                continue
            break
        if T[self.i] != "from" or K[self.i + 1] != STRING:
            raise _Fail
        module = T[self.i + 1][1:-1]
        self.i += 2
        if T[self.i] in ("with", "assert") and T[self.i + 1] == "{":
            self.i = self._close_of(self.i + 1) + 1
        self._finish_statement()
        return ImportRecord(start, self._end(), module, names, brace_open, brace_close, trailing)

    def _class(self, start_i: int, decorators: list[DecoratorNode]) -> ClassDecl:
        T, K = self.T, self.K
        self._expect("class")
        name = ""
        if K[self.i] == IDENTIFIER and T[self.i] not in ("extends", "implements"):
            name = T[self.i]
            self.i += 1
        if T[self.i] == "<":
            j = self._try_type_args(self.i)
            if j < 0:
                raise _Fail
            self.i = j
        extends_name = None
        if T[self.i] == "extends":
            self.i += 1
            a = self.i
            expr = self.parse_postfix(self.parse_primary())
            callee = expr
            while isinstance(callee, Call):
                callee = callee.callee
            extends_name = self.text[callee.start:callee.end] if callee is not None else self.T[a]
            if T[self.i] == "<":
                j = self._try_type_args(self.i)
                if j < 0:
                    raise _Fail
                self.i = j
        if T[self.i] == "implements":
            while self.i < len(T) - 1 and not (T[self.i] == "{" and K[self.i] == PUNCTUATION):
                if T[self.i] == "<":
                    j = self._try_type_args(self.i)
                    self.i = j if j > 0 else self.i + 1
                else:
                    self.i += 1
        if T[self.i] != "{":
            raise _Fail
        open_i = self.i
        close = self._close_of(open_i)
        properties: list[PropertyMember] = []
        methods: list[MethodMember] = []
        self.i = open_i + 1
        while self.i < close:
            if T[self.i] == ";":
                self.i += 1
                continue
            member_start = self.i
            try:
                self._member(properties, methods)
                if self.i > close:
                    raise _Fail
            except _Fail:
                end_i, _ = self._skip_statement(member_start, close)
                self.i = end_i
        self.i = close + 1 if close < len(T) - 1 else close
        return ClassDecl(self.S[start_i], self.E[close], name, decorators, extends_name, properties, methods)

    def _modifier_applies(self, i: int) -> bool:
        j = i + 1
        if self.NL[j] and self.T[i] not in ("public", "private", "protected", "static", "readonly"):
            return False
        k = self.K[j]
        return k in (IDENTIFIER, KEYWORD, STRING, NUMBER) or self.T[j] in ("[", "*", "{")

    def _member(self, properties: list[PropertyMember], methods: list[MethodMember]) -> None:
        T, K = self.T, self.K
        start_i = self.i
        start = self.S[start_i]
        decorators: list[DecoratorNode] = []
        while T[self.i] == "@":
            decorators.append(self._decorator())
        mods: set[str] = set()
        while T[self.i] in _MEMBER_MODIFIERS and K[self.i] == IDENTIFIER and self._modifier_applies(self.i):
            mods.add(T[self.i])
            self.i += 1
        if T[self.i] == "{" and "static" in mods:
            self.i = self._close_of(self.i) + 1
            return
        accessor = None
        if (
            T[self.i] in ("get", "set")
            and K[self.i] == IDENTIFIER
            and not self.NL[self.i + 1]
            and (self._is_name(self.i + 1) or K[self.i + 1] == STRING or T[self.i + 1] == "[")
        ):
            accessor = T[self.i]
            self.i += 1
        if T[self.i] == "*":
            self.i += 1
        j = self.i
        if T[j] == "[" and K[j] == PUNCTUATION:
            if K[j + 1] == IDENTIFIER and T[j + 2] == ":":
                # index signature
                end_i, _ = self._skip_statement(j, len(T) - 1)
                self.i = end_i
                return
            close = self.M[j]
            if close < 0:
                raise _Fail
            name = self.text[self.S[j]:self.E[close]]
            self.i = close + 1
        elif K[j] in (IDENTIFIER, KEYWORD, NUMBER):
            name = T[j]
            self.i = j + 1
        elif K[j] == STRING:
            name = T[j][1:-1]
            self.i = j + 1
        else:
            raise _Fail
        name_start, name_end = self.S[j], self.E[self.i - 1]
        if T[self.i] in ("?", "!") and K[self.i] == PUNCTUATION:
            self.i += 1
        if T[self.i] == "<":
            jj = self._try_type_args(self.i)
            if jj < 0:
                raise _Fail
            self.i = jj
        visibility = next((v for v in _VISIBILITY if v in mods), "public")
        if name.startswith("#"):
            visibility = "private"
        if T[self.i] == "(" and K[self.i] == PUNCTUATION:
            params = self._params()
            if T[self.i] == ":":
                self.i = self._skip_type(self.i + 1)
            if T[self.i] != "{":
                # overload signature or abstract member
                self._finish_statement()
                return
            body = self._block()
            methods.append(
                MethodMember(start, self._end(), name, params, body, "static" in mods, accessor, decorators)
            )
            if name == "constructor":
                for p in params:
                    if p.modifiers:
                        vis = next((v for v in _VISIBILITY if v in p.modifiers), "public")
                        pname_i = self._name_offset(p)
                        properties.append(
                            PropertyMember(
                                p.start, p.end, p.name, pname_i, pname_i + len(p.name),
                                p.type_annotation, p.default, vis, "readonly" in p.modifiers,
                                False, [], True,
                            )
                        )
            return
        type_ref = None
        if T[self.i] == ":":
            a = self.i + 1
            self.i = self._skip_type(a)
            type_ref = self._type_ref(a, self.i)
        init = None
        if T[self.i] == "=" and K[self.i] == PUNCTUATION:
            self.i += 1
            init = self.parse_assignment()
        self._finish_statement()
        properties.append(
            PropertyMember(
                start, self._end(), name, name_start, name_end, type_ref, init, visibility,
                "readonly" in mods, "static" in mods, decorators,
            )
        )

    def _name_offset(self, param: Param) -> int:
        pos = self.text.find(param.name, param.start, param.end)
        return pos if pos >= 0 else param.start

    # -- top level --------------------------------------------------------

    def parse_file(self) -> tuple[list[ImportRecord], list[ClassDecl], list[Stmt]]:
        T, K = self.T, self.K
        imports: list[ImportRecord] = []
        classes: list[ClassDecl] = []
        statements: list[Stmt] = []
        eof = len(T) - 1
        while self.i < eof:
            i = self.i
            t = T[i]
            if t == ";" or (t in _CLOSERS and K[i] == PUNCTUATION):
                self.i += 1
                continue
            try:
                if t == "import" and K[i] == KEYWORD and T[i + 1] not in ("(", "."):
                    imports.append(self._import())
                    continue
                decorators: list[DecoratorNode] = []
                while T[self.i] == "@":
                    decorators.append(self._decorator())
                j = self.i
                while T[j] in ("export", "default", "abstract", "declare") and self._is_name(j + 1):
                    j += 1
                while T[j] == "@":
                    self.i = j
                    decorators.append(self._decorator())
                    j = self.i
                if T[j] == "class" and K[j] == KEYWORD:
                    self.i = j
                    classes.append(self._class(i, decorators))
                    continue
                if decorators:
                    raise _Fail
                if T[i] == "export" and T[i + 1] in ("const", "let", "var", "function"):
                    self.i = i + 1
                    stmt = self.parse_statement(eof)
                    if stmt is not None:
                        statements.append(stmt)
                    continue
                self.i = i
                stmt = self.parse_statement(eof)
                if stmt is not None:
                    statements.append(stmt)
            except _Fail:
                self.i = i
                statements.append(self._unknown_statement(i, eof))
        return imports, classes, statements


def parse_script(unit) -> ScriptAst:
    """Parse a script unit. Never raises on malformed input."""
    index = LineIndex(unit.path, unit.text)
    parser = _Parser(unit.text, index)
    imports, classes, statements = parser.parse_file()
    return ScriptAst(unit, index, imports, classes, statements, parser.errors)


def parse_expression_text(text: str) -> Expr:
    """Parse a standalone expression (used by tests and fix rendering)."""
    parser = _Parser(text, LineIndex("<expr>", text))
    expr = parser.parse_expression()
    if parser.K[parser.i] != EOF:
        raise ValueError(f"trailing input at offset {parser.S[parser.i]}")
    return expr
