"""Command line front end.

Exit codes: 0 success (or Sat), 1 input or placement errors, 2 no model
within scope, 3 search timeout, 64 usage mistakes, 74 I/O failures.
Machine-readable output (witness text, OCL, generated Java, CSV) goes to
standard output or files; prose goes to standard error.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from pathlib import Path
from typing import NoReturn, Sequence

from . import bench as bench_mod
from .analysis import analyze
from .ast_nodes import AnnSourceFile
from .checker import check, unknown_annotation_notes
from .codegen import generate_all
from .compiler import compile_set
from .diagnostics import Diagnostic, Severity
from .finder import Sat, Scope, Timeout, find, explain_scope
from .javatext import to_java_text
from .model import ModelFormatError, dumps, loads
from .ocl import emit_ocl
from .parser import parse_source

EX_USAGE = 64
EX_IOERR = 74

_SCOPE_KEYS = ("ann_min", "ann_max", "max_classifiers", "max_methods", "max_fields", "deadline_ms")


class _CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    """argparse, but usage mistakes exit with a distinct code."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        raise _CliError(f"{self.prog}: error: {message}", EX_USAGE)


def _styled(text: str, code: str) -> str:
    if os.environ.get("NO_COLOR") or not sys.stderr.isatty():
        return text
    return f"\x1b[{code}m{text}\x1b[0m"


def _say(text: str) -> None:
    print(text, file=sys.stderr)


# ── Input loading ────────────────────────────────────────────────


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _CliError(f"annlint: cannot read {path}: {exc.strerror or exc}", EX_IOERR)


def _write_text(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise _CliError(f"annlint: cannot write {path}: {exc.strerror or exc}", EX_IOERR)


def _load_files(paths: Sequence[str]) -> tuple[list[AnnSourceFile], list[Diagnostic]]:
    files = []
    diagnostics: list[Diagnostic] = []
    for path in paths:
        file, parse_diags = parse_source(_read_text(path), filename=path)
        files.append(file)
        diagnostics += parse_diags
    diagnostics += analyze(files)
    return files, diagnostics


def _report(diagnostics: Sequence[Diagnostic]) -> bool:
    """Print diagnostics; return True when any is an error."""
    failed = False
    for diag in diagnostics:
        line = diag.format()
        if diag.severity is Severity.ERROR:
            failed = True
            line = _styled(line, "31")
        _say(line)
    return failed


def _clean_input(paths: Sequence[str]) -> list[AnnSourceFile]:
    files, diagnostics = _load_files(paths)
    if _report(diagnostics):
        raise _CliError("annlint: input does not parse cleanly; aborting", 1)
    return files


# ── Scope configuration ──────────────────────────────────────────


def _read_config(path: str) -> dict[str, int]:
    values: dict[str, int] = {}
    for lineno, raw in enumerate(_read_text(path).splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or key not in _SCOPE_KEYS:
            raise _CliError(f"annlint: {path}:{lineno}: expected `key = integer` with key one of {', '.join(_SCOPE_KEYS)}", EX_USAGE)
        try:
            values[key] = int(value.strip())
        except ValueError:
            raise _CliError(f"annlint: {path}:{lineno}: {value.strip()!r} is not an integer", EX_USAGE)
    return values


def _add_scope_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("scope")
    group.add_argument("--config", metavar="FILE", help="key = value file with scope settings")
    group.add_argument("--ann-min", type=int, metavar="N", help="minimum uses per annotation (default 1)")
    group.add_argument("--ann-max", type=int, metavar="N", help="maximum uses per annotation (default 2)")
    group.add_argument("--max-classifiers", type=int, metavar="N", help="classifiers per candidate (default 3)")
    group.add_argument("--max-methods", type=int, metavar="N", help="methods per classifier (default 3)")
    group.add_argument("--max-fields", type=int, metavar="N", help="fields per classifier (default 3)")
    group.add_argument("--deadline-ms", type=int, metavar="MS", help="search deadline in milliseconds")


def _scope_from(args: argparse.Namespace) -> Scope:
    values: dict[str, int] = {}
    if getattr(args, "config", None):
        values.update(_read_config(args.config))
    for key in _SCOPE_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    scope = dataclasses.replace(Scope(), **values)
    try:
        scope.validate()
    except ValueError as exc:
        raise _CliError(f"annlint: bad scope: {exc}", EX_USAGE)
    return scope


# ── Subcommands ──────────────────────────────────────────────────


def _cmd_parse(args: argparse.Namespace) -> int:
    _, diagnostics = _load_files(args.files)
    if _report(diagnostics):
        return 1
    _say(f"annlint: {len(args.files)} file(s) parse cleanly")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    files = _clean_input(args.files)
    ir, warnings = compile_set(files)
    _report(warnings)
    scope = _scope_from(args)
    result = find(ir, scope=scope)
    _say("annlint: " + explain_scope(result, scope))
    if isinstance(result, Sat):
        print("Sat")
        if args.example:
            print(to_java_text(result.witness), end="")
            _write_text(Path("witness.json"), dumps(result.witness))
            _say("annlint: witness written to witness.json")
        return 0
    if isinstance(result, Timeout):
        print("Timeout")
        return 3
    print("UnsatWithinScope")
    return 2


def _cmd_check(args: argparse.Namespace) -> int:
    files = _clean_input(args.files)
    try:
        model = loads(_read_text(args.model))
    except ModelFormatError as exc:
        raise _CliError(f"annlint: {args.model}: {exc}", 1)
    for note in unknown_annotation_notes(model, files):
        _say(note)
    failed = False
    for diag in check(model, files):
        line = diag.format()
        if diag.severity == "error":
            failed = True
            line = _styled(line, "31")
        _say(line)
    return 1 if failed else 0


def _cmd_gen(args: argparse.Namespace) -> int:
    files = _clean_input(args.files)
    ir, warnings = compile_set(files)
    _report(warnings)
    out = Path(args.out)
    for file in files:
        for unit in generate_all(file, ir):
            _write_text(out / unit.relative_path, unit.contents)
            _say(f"annlint: wrote {out / unit.relative_path}")
    return 0


def _cmd_ocl(args: argparse.Namespace) -> int:
    files = _clean_input(args.files)
    ir, warnings = compile_set(files)
    _report(warnings)
    text = emit_ocl(ir)
    if args.out:
        _write_text(Path(args.out), text)
        _say(f"annlint: wrote {args.out}")
    else:
        print(text, end="")
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    cases = bench_mod.suite(args.max_anns)
    rows = bench_mod.run_suite(cases, scope=_scope_from(args))
    _say("annlint: " + bench_mod.summarize(rows))
    return 0


# ── Entry point ──────────────────────────────────────────────────


def _build_parser() -> _Parser:
    parser = _Parser(prog="annlint", description="Toolchain for Ann annotation constraint sets.")
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("parse", help="syntax and semantic analysis only")
    p.add_argument("files", nargs="+", metavar="file")
    p.set_defaults(run=_cmd_parse)

    p = sub.add_parser("validate", help="search for a program model satisfying the set")
    p.add_argument("files", nargs="+", metavar="file")
    p.add_argument("--example", action="store_true", help="on Sat, print the witness and write witness.json")
    _add_scope_flags(p)
    p.set_defaults(run=_cmd_validate)

    p = sub.add_parser("check", help="check an annotated program model")
    p.add_argument("--model", required=True, metavar="FILE", help="program model as JSON")
    p.add_argument("files", nargs="+", metavar="file")
    p.set_defaults(run=_cmd_check)

    p = sub.add_parser("gen", help="generate annotation types and processors")
    p.add_argument("--out", required=True, metavar="DIR", help="output directory")
    p.add_argument("files", nargs="+", metavar="file")
    p.set_defaults(run=_cmd_gen)

    p = sub.add_parser("ocl", help="emit a USE/OCL specification")
    p.add_argument("--out", metavar="FILE", help="output file (default: stdout)")
    p.add_argument("files", nargs="+", metavar="file")
    p.set_defaults(run=_cmd_ocl)

    p = sub.add_parser("bench", help="run the synthetic scaling suite, CSV on stdout")
    p.add_argument("--max-anns", type=int, default=16, metavar="N", help="largest set size (default 16)")
    _add_scope_flags(p)
    p.set_defaults(run=_cmd_bench)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "run", None) is None:
            parser.error("a subcommand is required")
        return args.run(args)
    except _CliError as exc:
        _say(str(exc))
        return exc.code
