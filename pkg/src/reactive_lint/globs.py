"""Glob patterns over workspace-relative POSIX paths.

Supported syntax: `*` (any run inside one path segment), `**` (any number of
whole segments), `?`, `[...]` classes and nested `{a,b}` alternation.
Matching is case-sensitive on every platform.
"""
from __future__ import annotations

import re
from functools import lru_cache

_MAGIC = re.compile(r"[*?[{]")


def has_magic(pattern: str) -> bool:
    return _MAGIC.search(pattern) is not None


def normalize_pattern(pattern: str) -> str:
    pattern = pattern.replace("\\", "/")
    while pattern.startswith("./"):
        pattern = pattern[2:]
    return pattern


def _translate(pattern: str, i: int, stop: str) -> tuple[str, int]:
    """Translate from `i` until one of `stop` at brace depth zero."""
    out: list[str] = []
    n = len(pattern)
    while i < n:
        c = pattern[i]
        if c in stop:
            break
        if c == "*":
            if pattern.startswith("**", i):
                at_segment_start = i == 0 or pattern[i - 1] == "/"
                j = i + 2
                if at_segment_start and pattern.startswith("/", j):
                    out.append("(?:[^/]*/)*")
                    i = j + 1
                    continue
                if at_segment_start and j == n:
                    out.append(".*")
                    i = j
                    continue
                # `a**b` behaves like a single star
                out.append("[^/]*")
                i = j
                continue
            out.append("[^/]*")
            i += 1
        elif c == "?":
            out.append("[^/]")
            i += 1
        elif c == "[":
            j = i + 1
            if j < n and pattern[j] in "!^":
                j += 1
            if j < n and pattern[j] == "]":
                j += 1
            while j < n and pattern[j] != "]":
                j += 1
            if j >= n:
                out.append(re.escape(c))
                i += 1
                continue
            body = pattern[i + 1:j]
            if body[:1] in ("!", "^"):
                body = "^" + body[1:]
            out.append("[" + body.replace("\\", "\\\\") + "]")
            i = j + 1
        elif c == "{":
            alternatives: list[str] = []
            j = i + 1
            closed = False
            while j <= n:
                part, j = _translate(pattern, j, ",}")
                alternatives.append(part)
                if j >= n:
                    break
                if pattern[j] == "}":
                    closed = True
                    j += 1
                    break
                j += 1
            if not closed:
                out.append(re.escape(c))
                i += 1
                continue
            out.append("(?:" + "|".join(alternatives) + ")")
            i = j
        else:
            out.append(re.escape(c))
            i += 1
    return "".join(out), i


@lru_cache(maxsize=256)
def compile_glob(pattern: str) -> re.Pattern[str]:
    body, _ = _translate(normalize_pattern(pattern), 0, "")
    return re.compile(body + r"\Z")


def matches(pattern: str, path: str) -> bool:
    return compile_glob(pattern).match(path) is not None


def match_any(patterns, path: str) -> bool:
    return any(compile_glob(p).match(path) for p in patterns)


def static_prefix(pattern: str) -> str:
    """Leading directory components that contain no glob syntax."""
    parts = normalize_pattern(pattern).split("/")
    prefix: list[str] = []
    for part in parts[:-1]:
        if has_magic(part):
            break
        prefix.append(part)
    return "/".join(prefix)
