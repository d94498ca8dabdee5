"""Project inspection: configuration, source discovery and template lookup."""
from __future__ import annotations

import json
import os
import posixpath
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping, Optional

from . import globs
from .catalog import INTERNAL_MISSING_TEMPLATE, INTERNAL_READ_ERROR, RULE_IDS, RULES
from .diagnostics import Diagnostic, Severity
from .spans import LineIndex, Span

CONFIG_FILE = "reactive-lint.json"
DEFAULT_INCLUDE = ("src/**/*.ts",)
DEFAULT_EXCLUDE = ("**/node_modules/**", "**/*.d.ts")
_CONFIG_KEYS = frozenset(("rules", "failLevel", "include", "exclude", "$schema"))
_RULE_VALUES = ("off", "error", "warning", "suggestion")


class ConfigError(Exception):
    """Fatal configuration problem; the CLI exits with status 2."""


@dataclass(frozen=True)
class SourceUnit:
    """One analyzed text.

    Inline templates are synthetic units: `path` names the owning script,
    `text` is the template source and `host_offset` is the character offset
    of that source inside `host_text`, so spans land in the real file.
    """

    path: str
    text: str
    kind: str  # "script" | "template"
    byte_length: int
    host_offset: int = 0
    host_text: Optional[str] = None

    @classmethod
    def from_text(cls, path: str, text: str, kind: Optional[str] = None) -> "SourceUnit":
        if kind is None:
            kind = classify_path(path)
        return cls(path, text, kind, len(text.encode("utf-8")))

    @property
    def is_synthetic(self) -> bool:
        return self.host_text is not None

    def line_index(self) -> LineIndex:
        return LineIndex(self.path, self.host_text if self.host_text is not None else self.text)


@dataclass(frozen=True)
class RuleSetting:
    enabled: bool
    severity: Severity


@dataclass(frozen=True)
class RuleConfig:
    rules: Mapping[str, RuleSetting]
    fail_level: Severity = Severity.WARNING

    @classmethod
    def defaults(cls) -> "RuleConfig":
        return cls(
            {rid: RuleSetting(True, meta.default_severity) for rid, meta in RULES.items()},
            Severity.WARNING,
        )

    @property
    def enabled_rules(self) -> list[str]:
        return [rid for rid in RULE_IDS if self.rules[rid].enabled]

    def with_rule_values(self, values: Mapping[str, str]) -> "RuleConfig":
        rules = dict(self.rules)
        for rid, value in values.items():
            if value == "off":
                rules[rid] = RuleSetting(False, rules[rid].severity)
            else:
                rules[rid] = RuleSetting(True, Severity(value))
        return replace(self, rules=rules)

    def summary(self) -> dict:
        return {
            "failLevel": self.fail_level.value,
            "rules": {
                rid: (self.rules[rid].severity.value if self.rules[rid].enabled else "off")
                for rid in RULE_IDS
            },
        }


@dataclass(frozen=True)
class ProjectConfig:
    root_dir: Path
    include_globs: tuple[str, ...] = DEFAULT_INCLUDE
    exclude_globs: tuple[str, ...] = DEFAULT_EXCLUDE
    config_path: Optional[Path] = None
    rule_config: RuleConfig = field(default_factory=RuleConfig.defaults)
    # (directory prefix, rule values) from nested config files, shallowest first
    nested_rules: tuple[tuple[str, tuple[tuple[str, str], ...]], ...] = ()

    def __post_init__(self) -> None:
        if not self.include_globs:
            raise ConfigError("include globs must not be empty")

    def rules_for(self, path: str) -> RuleConfig:
        config = self.rule_config
        for prefix, values in self.nested_rules:
            if path.startswith(prefix + "/"):
                config = config.with_rule_values(dict(values))
        return config


def is_excluded(patterns: Iterable[str], path: str) -> bool:
    """Glob match, where a pattern without glob syntax also excludes a directory."""
    for pattern in patterns:
        if globs.matches(pattern, path):
            return True
        if not globs.has_magic(pattern) and path.startswith(pattern.rstrip("/") + "/"):
            return True
    return False


def classify_path(path: str) -> str:
    return "template" if path.endswith(".html") else "script"


# -- configuration ------------------------------------------------------


def _strip_jsonc(text: str) -> str:
    """Remove comments and trailing commas, leaving strings untouched."""
    out: list[str] = []
    for m in re.finditer(r'"(?:[^"\\]|\\.)*"|//[^\n]*|/\*[\s\S]*?\*/|[\s\S]', text):
        tok = m.group()
        if tok.startswith("//") or tok.startswith("/*"):
            out.append(" ")
        else:
            out.append(tok)
    return re.sub(r",(\s*[}\]])", r"\1", "".join(out))


def _read_json(path: Path, jsonc: bool = False) -> object:
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config file ({exc.strerror})") from None
    try:
        return json.loads(_strip_jsonc(raw) if jsonc else raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}") from None


def _string_list(path: Path, key: str, value: object) -> tuple[str, ...]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ConfigError(f"{path}: key '{key}' must be an array of strings")
    return tuple(value)


def _validate_rules(path: Path, value: object) -> dict[str, str]:
    if not isinstance(value, dict):
        raise ConfigError(f"{path}: key 'rules' must be an object")
    out = {}
    for rid, setting in value.items():
        if rid not in RULES:
            raise ConfigError(f"{path}: unknown rule id 'rules.{rid}'")
        if setting not in _RULE_VALUES:
            raise ConfigError(
                f"{path}: key 'rules.{rid}' must be one of {', '.join(_RULE_VALUES)}"
            )
        out[rid] = setting
    return out


def read_config_file(path: Path) -> dict:
    """Validated contents of a `reactive-lint.json` file."""
    data = _read_json(path)
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    for key in data:
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}: unknown key '{key}'")
    out: dict = {}
    if "rules" in data:
        out["rules"] = _validate_rules(path, data["rules"])
    if "failLevel" in data:
        level = data["failLevel"]
        if level not in ("error", "warning", "suggestion"):
            raise ConfigError(f"{path}: key 'failLevel' must be error, warning or suggestion")
        out["failLevel"] = Severity(level)
    for key in ("include", "exclude"):
        if key in data:
            out[key] = _string_list(path, key, data[key])
    return out


def load_config(path: Optional[Path] = None, root: Optional[Path] = None) -> RuleConfig:
    """Rule settings from `path`, or from the root config file, or defaults."""
    if path is None and root is not None and (Path(root) / CONFIG_FILE).is_file():
        path = Path(root) / CONFIG_FILE
    config = RuleConfig.defaults()
    if path is None:
        return config
    data = read_config_file(Path(path))
    config = config.with_rule_values(data.get("rules", {}))
    if "failLevel" in data:
        config = replace(config, fail_level=data["failLevel"])
    return config


def _tsconfig_patterns(root: Path) -> tuple[tuple[str, ...], tuple[str, ...]]:
    ts = root / "tsconfig.json"
    if not ts.is_file():
        return (), ()
    data = _read_json(ts, jsonc=True)
    if not isinstance(data, dict):
        return (), ()
    include: list[str] = []
    for entry in data.get("files") or []:
        if isinstance(entry, str):
            include.append(globs.normalize_pattern(entry))
    for entry in data.get("include") or []:
        if not isinstance(entry, str):
            continue
        entry = globs.normalize_pattern(entry).rstrip("/")
        last = entry.rsplit("/", 1)[-1]
        if not globs.has_magic(last) and "." not in last:
            # a bare directory means everything below it
            entry = f"{entry}/**/*" if entry else "**/*"
        include.append(entry)
    exclude = [
        globs.normalize_pattern(e) for e in data.get("exclude") or [] if isinstance(e, str)
    ]
    return tuple(include), tuple(exclude)


def with_template_companions(patterns: Iterable[str]) -> tuple[str, ...]:
    """Add a `.html` twin for every pattern ending in `.ts`.

    External templates sit next to their components, so a script glob such as
    `src/**/*.ts` also has to find `src/**/*.html` for `templateUrl` to resolve.
    """
    out: list[str] = []
    for p in patterns:
        if p not in out:
            out.append(p)
        if p.endswith(".ts") and not p.endswith(".d.ts"):
            twin = p[:-3] + ".html"
            if twin not in out:
                out.append(twin)
    return tuple(out)


def load_project(
    root: os.PathLike | str = ".",
    cli_globs: Iterable[str] = (),
    config_path: Optional[os.PathLike | str] = None,
) -> ProjectConfig:
    root_dir = Path(root)
    if not root_dir.is_dir():
        raise ConfigError(f"workspace root '{root}' does not exist or is not a directory")
    explicit = Path(config_path) if config_path is not None else None
    if explicit is None and (root_dir / CONFIG_FILE).is_file():
        explicit = root_dir / CONFIG_FILE
    data = read_config_file(explicit) if explicit is not None else {}
    rule_config = load_config(explicit)

    include: tuple[str, ...] = tuple(globs.normalize_pattern(g) for g in cli_globs)
    exclude = DEFAULT_EXCLUDE + tuple(data.get("exclude", ()))
    if not include:
        include = tuple(globs.normalize_pattern(g) for g in data.get("include", ()))
    if not include:
        ts_include, ts_exclude = _tsconfig_patterns(root_dir)
        include = ts_include
        exclude = exclude + ts_exclude
    if not include:
        include = DEFAULT_INCLUDE
    include = tuple(_relative_pattern(root_dir, p) for p in include)
    return ProjectConfig(
        root_dir=root_dir,
        include_globs=with_template_companions(include),
        exclude_globs=tuple(dict.fromkeys(exclude)),
        config_path=explicit,
        rule_config=rule_config,
        nested_rules=_nested_rules(root_dir, explicit),
    )


def _relative_pattern(root: Path, pattern: str) -> str:
    if posixpath.isabs(pattern):
        root_posix = root.resolve().as_posix().rstrip("/") + "/"
        if pattern.startswith(root_posix):
            return pattern[len(root_posix):]
    return pattern


def _nested_rules(root: Path, top: Optional[Path]):
    found = []
    for dirpath, dirnames, filenames in os.walk(root, followlinks=False):
        dirnames[:] = sorted(d for d in dirnames if d != "node_modules" and not d.startswith("."))
        if CONFIG_FILE not in filenames:
            continue
        rel = Path(dirpath).relative_to(root).as_posix()
        if rel == ".":
            continue
        cfg = Path(dirpath) / CONFIG_FILE
        if top is not None and cfg.resolve() == top.resolve():
            continue
        data = read_config_file(cfg)
        if data.get("rules"):
            found.append((rel, tuple(sorted(data["rules"].items()))))
    found.sort(key=lambda item: (item[0].count("/"), item[0].encode("utf-8")))
    return tuple(found)


# -- discovery ----------------------------------------------------------


def _file_diagnostic(path: str, message: str) -> Diagnostic:
    return Diagnostic(
        INTERNAL_READ_ERROR,
        Severity.ERROR,
        Span(path, 0, 0, 1, 1, 1, 1),
        message,
    )


def _candidate_paths(config: ProjectConfig) -> list[str]:
    root = config.root_dir
    starts = sorted({globs.static_prefix(p) for p in config.include_globs})
    # walking a prefix that sits below another prefix would list files twice
    starts = [s for s in starts if not any(o != s and (o == "" or s.startswith(o + "/")) for o in starts)]
    seen: list[str] = []
    for start in starts:
        base = root / start if start else root
        if not base.is_dir():
            continue
        for dirpath, dirnames, filenames in os.walk(base, followlinks=False):
            rel_dir = Path(dirpath).relative_to(root).as_posix()
            rel_dir = "" if rel_dir == "." else rel_dir
            kept = []
            for d in dirnames:
                rel = f"{rel_dir}/{d}" if rel_dir else d
                if is_excluded(config.exclude_globs, rel + "/"):
                    continue
                kept.append(d)
            dirnames[:] = kept
            for name in filenames:
                seen.append(f"{rel_dir}/{name}" if rel_dir else name)
    return seen


def discover_sources(
    config: ProjectConfig, diagnostics: Optional[list[Diagnostic]] = None
) -> list[SourceUnit]:
    """All included, non-excluded `.ts`/`.html` files sorted by UTF-8 path bytes.

    Unreadable files are skipped; a diagnostic for each is appended to
    `diagnostics` when a list is given.
    """
    if not config.root_dir.is_dir():
        raise ConfigError(f"workspace root '{config.root_dir}' does not exist")
    paths = [
        p
        for p in _candidate_paths(config)
        if (p.endswith(".ts") or p.endswith(".html"))
        and globs.match_any(config.include_globs, p)
        and not is_excluded(config.exclude_globs, p)
    ]
    paths.sort(key=lambda p: p.encode("utf-8"))
    units: list[SourceUnit] = []
    for rel in paths:
        full = config.root_dir / rel
        try:
            data = full.read_bytes()
        except OSError as exc:
            if diagnostics is not None:
                diagnostics.append(_file_diagnostic(rel, f"Cannot read file: {exc.strerror}."))
            continue
        text = data.decode("utf-8", errors="replace")
        units.append(SourceUnit(rel, text, classify_path(rel), len(text.encode("utf-8"))))
    return units


# -- templates ----------------------------------------------------------


def _string_content(node, host_text: str) -> Optional[tuple[str, int]]:
    """Raw content and start offset of a string or template literal node."""
    kind = getattr(node, "kind", None)
    if kind not in ("string", "template"):
        return None
    raw = host_text[node.start:node.end]
    if len(raw) < 2:
        return None
    return raw[1:-1], node.start + 1


def resolve_template(
    decorator,
    owning_unit: SourceUnit,
    all_units: Mapping[str, SourceUnit],
) -> tuple[Optional[SourceUnit], Optional[Diagnostic]]:
    """Template unit for a component decorator, plus a diagnostic if it is missing."""
    metadata = decorator.metadata
    host = owning_unit.text
    inline = metadata.get("template")
    if inline is not None:
        content = _string_content(inline, host)
        if content is None:
            return None, None
        text, offset = content
        return (
            SourceUnit(
                owning_unit.path,
                text,
                "template",
                len(text.encode("utf-8")),
                host_offset=offset,
                host_text=host,
            ),
            None,
        )
    url = metadata.get("templateUrl")
    if url is None:
        return None, None
    content = _string_content(url, host)
    if content is None:
        return None, None
    ref, _ = content
    target = posixpath.normpath(posixpath.join(posixpath.dirname(owning_unit.path), ref))
    unit = all_units.get(target)
    if unit is not None and unit.kind == "template":
        return unit, None
    index = LineIndex(owning_unit.path, host)
    return None, Diagnostic(
        INTERNAL_MISSING_TEMPLATE,
        Severity.WARNING,
        index.span(url.start, url.end),
        f"Template '{ref}' was not found; the component is analyzed without template facts.",
    )
