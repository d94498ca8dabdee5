"""`reactive-lint` command-line entry point."""
from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence, TextIO

from . import __version__
from .diagnostics import Diagnostic
from .fixes import apply_fixes
from .pipeline import default_jobs, lint
from .report import EXIT_USAGE, format_json, format_text, report_exit_status
from .workspace import ConfigError, load_project

MAX_FIX_PASSES = 10


def _positive_int(value: str) -> int:
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got '{value}'")
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got '{value}'")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reactive-lint",
        description="Find reactivity anti-patterns in Angular components.",
    )
    parser.add_argument("globs", nargs="*", metavar="GLOB", help="files to lint, relative to the current directory")
    parser.add_argument("--ci", action="store_true", help="JSON output, no color, exit 1 at or above failLevel")
    parser.add_argument("--fix", action="store_true", help="apply safe fixes in place")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--config", metavar="PATH", help="configuration file (default: ./reactive-lint.json)")
    parser.add_argument("--jobs", type=_positive_int, default=None, metavar="N", help="worker processes")
    parser.add_argument("--debug-ast", action="store_true", help="print parsed ASTs and component models as JSON")
    parser.add_argument("--version", action="version", version=f"reactive-lint {__version__}")
    return parser


def use_color(stream: TextIO, ci: bool, environ: Optional[dict] = None) -> bool:
    env = os.environ if environ is None else environ
    if ci or env.get("NO_COLOR"):
        return False
    isatty = getattr(stream, "isatty", None)
    return bool(isatty and isatty())


def _fix_loop(project, jobs: int, err: TextIO) -> list[Diagnostic]:
    """Apply safe fixes until nothing changes; returns fix-skipped notices."""
    notices: list[Diagnostic] = []
    applied = dropped = 0
    for _ in range(MAX_FIX_PASSES):
        run = lint(project, jobs=jobs)
        result = apply_fixes(project.root_dir, run.texts, run.diagnostics)
        notices.extend(result.skipped)
        applied += result.applied
        dropped += result.dropped
        if not result.texts:
            break
    err.write(f"Applied {applied} fix{'es' if applied != 1 else ''}")
    if dropped:
        err.write(f"; {dropped} overlapping fix{'es were' if dropped != 1 else ' was'} deferred or dropped")
    err.write(".\n")
    return notices


def run_cli(
    argv: Optional[Sequence[str]] = None,
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
    cwd: Optional[os.PathLike] = None,
) -> int:
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    parser = build_parser()
    try:
        # argparse prints usage, --help and --version itself
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    root = Path(cwd) if cwd is not None else Path.cwd()
    jobs = args.jobs or default_jobs()
    try:
        config_path = None
        if args.config:
            config_path = Path(args.config)
            if not config_path.is_absolute():
                config_path = root / config_path
            if not config_path.is_file():
                raise ConfigError(f"config file '{args.config}' does not exist")
        project = load_project(root, args.globs, config_path)
        notices: list[Diagnostic] = []
        if args.fix:
            notices = _fix_loop(project, jobs, err)
        run = lint(project, jobs=jobs, debug=args.debug_ast)
    except ConfigError as exc:
        err.write(f"reactive-lint: {exc}\n")
        parser.print_usage(err)
        return EXIT_USAGE
    except Exception as exc:  # internal failure
        err.write(f"reactive-lint: internal error: {type(exc).__name__}: {exc}\n")
        return EXIT_USAGE

    if not run.units:
        patterns = ", ".join(project.include_globs)
        err.write(f"reactive-lint: no files matched ({patterns})\n")
        parser.print_usage(err)
        return EXIT_USAGE

    if notices:
        run.diagnostics = sorted(run.diagnostics + notices, key=Diagnostic.sort_key)
    config = project.rule_config
    report = run.report(config)
    if args.debug_ast:
        out.write(json.dumps({"version": __version__, "files": run.debug}, indent=2, ensure_ascii=False) + "\n")
    elif args.ci or args.format == "json":
        out.write(format_json(report))
    else:
        out.write(format_text(report, color=use_color(out, args.ci)))
    out.flush()
    return report_exit_status(report, config.fail_level)


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
