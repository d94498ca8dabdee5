"""Tokenizer for the TypeScript subset.

The token stream covers the input completely: every byte belongs either to
a token or to the whitespace between two tokens. Comments are tokens.
"""
from __future__ import annotations

import re
from bisect import bisect_left
from itertools import accumulate, compress
from operator import add
from dataclasses import dataclass

IDENTIFIER = "identifier"
KEYWORD = "keyword"
PUNCTUATION = "punctuation"
STRING = "string_literal"
TEMPLATE = "template_literal"
NUMBER = "number"
COMMENT = "comment"
REGEX = "regex"
UNKNOWN = "unknown"
EOF = "eof"

KEYWORDS = frozenset(
    """break case catch class const continue debugger default delete do else
    enum export extends false finally for function if import in instanceof new
    null return super switch this throw true try typeof var void while with
    yield let""".split()
)

# words after which a `/` starts a regular expression
_REGEX_AFTER_WORD = frozenset(
    "return typeof instanceof in of new delete void throw case do else yield await".split()
)

_PUNCTUATORS = sorted(
    """>>>= ... === !== **= <<= >>= >>> &&= ||= ??= => == != <= >= && || ?? ?.
    ++ -- += -= *= %= &= |= ^= ** << >> { } ( ) [ ] ; , < > + - * % & | ^
    ! ~ ? : = . @ #""".split(),
    key=len,
    reverse=True,
)

_WS_CHARS = " \t\r\n\f\v\u00a0\ufeff\u2028\u2029"
# Every character of the input belongs to exactly one match, whitespace
# included, so token offsets follow from accumulated match lengths.
_MAIN = re.compile(
    r"""
    [ \t\r\n\f\v\u00a0\ufeff\u2028\u2029]+
  | //[^\n]*|/\*[\s\S]*?(?:\*/|\Z)
  | \#?[A-Za-z_$\u0080-\uffff][\w$\u0080-\uffff]*
  | 0[xX][0-9a-fA-F_]+n?|0[bB][01_]+n?|0[oO][0-7_]+n?
  | (?:\d[\d_]*(?:\.[\d_]*)?|\.\d[\d_]*)(?:[eE][+-]?\d+)?n?
  | '(?:[^'\\\n]|\\(?:.|\n))*'?|"(?:[^"\\\n]|\\(?:.|\n))*"?
  | `(?:[^`\\$]|\\[\s\S]|\$(?!\{)|\$\{[^{}`'"]*\})*`
  | """
    + "|".join(re.escape(p) for p in _PUNCTUATORS)
    + r"""
  | /=?
  | [\s\S]
    """,
    re.VERBOSE,
)
_WS = "ws"
_SPECIAL = "special"


class _FirstCharKinds(dict):
    def __missing__(self, c: str) -> str:
        return _WS if c in _WS_CHARS else IDENTIFIER


_FIRST_CHAR_KIND = _FirstCharKinds()
for _i in range(128):
    _c = chr(_i)
    if _c.isalpha() or _c in "_$":
        _FIRST_CHAR_KIND[_c] = IDENTIFIER
    elif _c.isdigit():
        _FIRST_CHAR_KIND[_c] = NUMBER
    elif _c in "'\"":
        _FIRST_CHAR_KIND[_c] = STRING
    elif _c in "{}()[];,<>+-*%&|^!~?:=@":
        _FIRST_CHAR_KIND[_c] = PUNCTUATION
    elif _c in "/`.#":
        _FIRST_CHAR_KIND[_c] = _SPECIAL
    elif _c in _WS_CHARS:
        _FIRST_CHAR_KIND[_c] = _WS
    else:
        _FIRST_CHAR_KIND[_c] = UNKNOWN
_CANDIDATE_CHAR = re.compile(r"[/`]")


def _classify(tok: str) -> str:
    kind = _FIRST_CHAR_KIND[tok[0]]
    if kind is not _SPECIAL:
        return KEYWORD if kind is IDENTIFIER and tok in KEYWORDS else kind
    c = tok[0]
    if c == "/":
        if tok[:2] in ("//", "/*"):
            return COMMENT
        return REGEX if len(tok) > 2 else PUNCTUATION
    if c == "`":
        return TEMPLATE
    if c == ".":
        return NUMBER if len(tok) > 1 and tok[1].isdigit() else PUNCTUATION
    return IDENTIFIER if len(tok) > 1 else PUNCTUATION


@dataclass(frozen=True, slots=True)
class Token:
    kind: str
    text: str
    start: int
    end: int


def _scan_template(text: str, pos: int) -> int:
    """Return the end offset of the template literal starting at `pos`."""
    n = len(text)
    i = pos + 1
    while i < n:
        ch = text[i]
        if ch == "\\":
            i += 2
        elif ch == "`":
            return i + 1
        elif ch == "$" and i + 1 < n and text[i + 1] == "{":
            i = _scan_substitution(text, i + 2)
        else:
            i += 1
    return n


def _scan_substitution(text: str, pos: int) -> int:
    n = len(text)
    depth = 0
    i = pos
    while i < n:
        ch = text[i]
        if ch in "'\"":
            j = i + 1
            while j < n and text[j] != ch and text[j] != "\n":
                j += 2 if text[j] == "\\" else 1
            i = j + 1
        elif ch == "`":
            i = _scan_template(text, i)
        elif ch == "{":
            depth += 1
            i += 1
        elif ch == "}":
            if depth == 0:
                return i + 1
            depth -= 1
            i += 1
        else:
            i += 1
    return n


def _scan_regex(text: str, pos: int) -> int:
    """End offset of a regex literal at `pos`, or -1 if there is none."""
    n = len(text)
    i = pos + 1
    in_class = False
    while i < n:
        ch = text[i]
        if ch == "\n":
            return -1
        if ch == "\\":
            i += 2
            continue
        if in_class:
            if ch == "]":
                in_class = False
        elif ch == "[":
            in_class = True
        elif ch == "/":
            i += 1
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            return i
        i += 1
    return -1


def _regex_allowed(kind: str, word: str) -> bool:
    if kind == PUNCTUATION:
        return word not in (")", "]", "}")
    if kind == IDENTIFIER or kind == KEYWORD:
        return word in _REGEX_AFTER_WORD
    return kind == UNKNOWN


def _is_candidate(tok: str) -> bool:
    return tok == "`" or (tok[0] == "/" and tok[:2] not in ("//", "/*"))


def _fixed_end(text: str, tok: str, start: int, emitted: list[str]) -> int | None:
    """End of the token at `start` when the bulk reading of `tok` is wrong."""
    if tok == "`":
        return _scan_template(text, start)
    prev = _previous_significant(emitted)
    if prev is None or _regex_allowed(_classify(prev), prev):
        end = _scan_regex(text, start)
        if end != -1:
            return end
    return None


def _previous_significant(emitted: list[str]) -> str | None:
    k = len(emitted) - 1
    while k >= 0:
        t = emitted[k]
        if t[0] not in _WS_CHARS and t[:2] not in ("//", "/*"):
            return t
        k -= 1
    return None


def lex(text: str) -> tuple[list[str], list[int], list[int]]:
    """Scan `text` into parallel (kinds, starts, ends) lists.

    A bulk regex pass reads every `/` as division and only accepts template
    literals with simple substitutions. Regex literals and other templates
    are re-scanned by hand, then tokens are matched one at a time until a
    token boundary coincides with the bulk pass again.
    """
    toks = _MAIN.findall(text)
    offs = list(accumulate(map(len, toks), initial=0))
    n_bulk = len(toks)
    n_text = len(text)
    cands = []
    for m in _CANDIDATE_CHAR.finditer(text):
        k = bisect_left(offs, m.start())
        if offs[k] == m.start() and k < n_bulk and _is_candidate(toks[k]):
            cands.append(k)
    if not cands:
        return _finish(text, toks, offs[:-1])
    out_t: list[str] = []
    out_s: list[int] = []
    i = 0
    ci = 0
    while i < n_bulk:
        while ci < len(cands) and cands[ci] < i:
            ci += 1
        j = cands[ci] if ci < len(cands) else n_bulk
        out_t.extend(toks[i:j])
        out_s.extend(offs[i:j])
        if j == n_bulk:
            break
        ci += 1
        end = _fixed_end(text, toks[j], offs[j], out_t)
        if end is None:
            out_t.append(toks[j])
            out_s.append(offs[j])
            i = j + 1
            continue
        out_t.append(text[offs[j]:end])
        out_s.append(offs[j])
        pos = end
        while True:
            if pos >= n_text:
                i = n_bulk
                break
            k = bisect_left(offs, pos, j + 1)
            if offs[k] == pos:
                i = k
                break
            tok = _MAIN.match(text, pos).group()
            fixed = _fixed_end(text, tok, pos, out_t) if _is_candidate(tok) else None
            out_t.append(tok if fixed is None else text[pos:fixed])
            out_s.append(pos)
            pos = fixed if fixed is not None else pos + len(tok)
    return _finish(text, out_t, out_s)


def _finish(text: str, toks: list[str], starts: list[int]):
    kinds = list(map(_FIRST_CHAR_KIND.__getitem__, map(text.__getitem__, starts)))
    n = len(kinds)
    for i in compress(range(n), map(_SPECIAL.__eq__, kinds)):
        kinds[i] = _classify(toks[i])
    for i in compress(range(n), map(KEYWORDS.__contains__, toks)):
        kinds[i] = KEYWORD
    keep = list(map(_WS.__ne__, kinds))
    starts = list(compress(starts, keep))
    ends = list(map(add, starts, map(len, compress(toks, keep))))
    return list(compress(kinds, keep)), starts, ends


def tokenize(unit) -> list[Token]:
    """Full-coverage token stream of a script unit."""
    text = unit.text
    kinds, starts, ends = lex(text)
    return [Token(k, text[s:e], s, e) for k, s, e in zip(kinds, starts, ends)]
