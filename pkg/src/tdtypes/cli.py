"""Command-line front end.

Exit codes: 0 success, 1 validation or typing errors, 2 parse errors,
3 usage errors (bad arguments, unreadable files, unknown names).
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from typing import Sequence, TextIO

from .diagnostics import (
    Diagnostic,
    LexError,
    ParseError,
    Severity,
    Span,
    TypeGraphError,
    TypingError,
    UnknownTypeError,
    has_errors,
)
from .lattice import BuildOptions, TypeGraph, build_graph
from .model import Declaration, ScalarValue, TypeDef, TypeRef, VarDecl
from .lexer import tokenize
from .parser import parse_source, parse_type_ref, parse_value
from .printer import format_type_ref
from .values import admits, least_specific_type, mst

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_USAGE = 0, 1, 2, 3
VALUE_FILE = "<value>"

_COLORS = {Severity.ERROR: "\033[31m", Severity.WARNING: "\033[33m", Severity.NOTE: "\033[36m"}


class UsageError(Exception):
    pass


class _Exit(Exception):
    def __init__(self, code: int):
        self.code = code


@dataclass(frozen=True)
class CliConfig:
    mode: str = "inheritance"
    strict: bool = False
    assume_declared: bool = False
    null_conforms_all: bool = False
    allow_null_attributes: bool = True
    color: str = "auto"

    @property
    def inheritance(self) -> bool:
        return self.mode == "inheritance"

    def build_options(self) -> BuildOptions:
        return BuildOptions(
            inheritance=self.inheritance, strict=self.strict, assume_declared=self.assume_declared
        )


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits 2 by default; usage errors are 3 here
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class Reporter:
    def __init__(self, stream: TextIO, color: str):
        self.stream = stream
        self.color = color == "on" or (color == "auto" and stream.isatty() and not os.environ.get("NO_COLOR"))

    def emit(self, d: Diagnostic) -> None:
        text = str(d)
        if self.color:
            label = f"{d.severity.value}:"
            text = text.replace(label, f"{_COLORS[d.severity]}{label}\033[0m", 1)
        print(text, file=self.stream)

    def emit_all(self, diags: Sequence[Diagnostic]) -> None:
        for d in diags:
            self.emit(d)


def load(files: Sequence[str], config: CliConfig, reporter: Reporter, *, warnings: bool = False) -> TypeGraph:
    """Parse files into one declaration space and build the graph, or raise _Exit."""
    decls: list[Declaration] = []
    diags: list[Diagnostic] = []
    for path in files:
        try:
            with open(path, encoding="utf-8") as fh:
                source = fh.read()
        except (OSError, UnicodeDecodeError) as exc:
            raise UsageError(f"cannot read {path}: {exc}") from None
        result = parse_source(
            source,
            path,
            strict=config.strict,
            inheritance=config.inheritance,
            allow_null_attributes=config.allow_null_attributes,
        )
        decls.extend(result.declarations)
        diags.extend(result.diagnostics)
    if has_errors(diags):
        reporter.emit_all(diags)
        raise _Exit(EXIT_PARSE)
    try:
        graph = build_graph(decls, config.build_options())
    except TypeGraphError as exc:
        reporter.emit_all(diags + exc.diagnostics)
        raise _Exit(EXIT_INVALID) from None
    if warnings:
        reporter.emit_all(diags + graph.warnings)
    return graph


def _looks_inline(text: str) -> bool:
    head = text.strip().split(None, 1)[0].upper() if text.strip() else ""
    return head.startswith(("TUPLE", "RELATION")) or "{" in text


def resolve_arg(g: TypeGraph, text: str, config: CliConfig) -> TypeRef:
    if _looks_inline(text):
        try:
            t = parse_type_ref(text, allow_null_attributes=config.allow_null_attributes)
        except (ParseError, LexError) as exc:
            raise UsageError(f"cannot parse type {text!r}: {exc}") from None
        _check_known(g, t)
        return t
    try:
        return g.resolve(text)
    except UnknownTypeError:
        raise UsageError(f"unknown type {text}") from None


def _check_known(g: TypeGraph, t: TypeRef) -> None:
    from .model import NullType

    if isinstance(t, NullType):
        return
    if t.is_nonscalar:
        for _, a in t.heading:  # type: ignore[union-attr]
            _check_known(g, a)
    elif t not in g:
        raise UsageError(f"unknown type {t}")


# -- commands -----------------------------------------------------------------


def cmd_check(args, config: CliConfig, reporter: Reporter, out: TextIO) -> int:
    g = load(args.files, config, reporter, warnings=True)
    for d in g.declarations:
        if isinstance(d, TypeDef):
            print(f"{d.name}: {g.describe(d.name)}", file=out)
        elif isinstance(d, VarDecl):
            print(f"VAR {d.name}: {g.describe_variable(d.name)}", file=out)
    return EXIT_OK


def cmd_subtype(args, config: CliConfig, reporter: Reporter, out: TextIO) -> int:
    g = load([args.file], config, reporter)
    a = resolve_arg(g, args.a, config)
    b = resolve_arg(g, args.b, config)
    print("true" if g.is_subtype(a, b) else "false", file=out)
    return EXIT_OK


def cmd_classify(args, config: CliConfig, reporter: Reporter, out: TextIO) -> int:
    g = load([args.file], config, reporter)
    for name in args.names:
        if name in g.variables and not _looks_inline(name):
            print(f"VAR {name}: {g.describe_variable(name)}", file=out)
            continue
        t = resolve_arg(g, name, config)
        print(f"{format_type_ref(t)}: {g.describe(t)}", file=out)
    return EXIT_OK


def cmd_lattice(args, config: CliConfig, reporter: Reporter, out: TextIO) -> int:
    g = load([args.file], config, reporter)
    if args.dot:
        out.write(g.to_dot(closure=args.closure))
    else:
        for child, parent in g.edges(closure=args.closure):
            print(f"{child} -> {parent}", file=out)
    return EXIT_OK


def cmd_mst(args, config: CliConfig, reporter: Reporter, out: TextIO) -> int:
    g = load([args.file], config, reporter)
    if (args.value is None) == (args.tag is None):
        raise UsageError("give exactly one of a value literal or --tag NAME")
    if args.tag is not None:
        try:
            tag = g.resolve(args.tag)
        except UnknownTypeError:
            raise UsageError(f"unknown type {args.tag}") from None
        try:
            value = ScalarValue(tag, args.literal or "")
        except TypeError as exc:
            raise UsageError(str(exc)) from None
    else:
        try:
            value = parse_value(tokenize(args.value, VALUE_FILE))
        except (ParseError, LexError) as exc:
            reporter.emit_all(exc.diagnostics)
            return EXIT_PARSE
    try:
        if args.conforms is not None:
            target = resolve_arg(g, args.conforms, config)
            ok = admits(target, value, g, null_conforms_all=config.null_conforms_all)
            print("true" if ok else "false", file=out)
            return EXIT_OK
        result = least_specific_type(value, g) if args.least else mst(value, g)
    except UnknownTypeError as exc:
        raise UsageError(str(exc)) from None
    except TypingError as exc:  # includes mst/lst-not-unique
        reporter.emit(Diagnostic.error(str(exc), Span(1, 1, file=VALUE_FILE)))
        return EXIT_INVALID
    print(format_type_ref(result), file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=("inheritance", "plain"), default="inheritance",
                        help="type system with or without inheritance (default: inheritance)")
    common.add_argument("--strict", action="store_true", help="enforce the grammar literally")
    common.add_argument("--assume-declared", action="store_true",
                        help="treat undeclared scalar type names as opaque root types")
    common.add_argument("--no-null-attributes", dest="allow_null_attributes", action="store_false",
                        help="reject '#' as an attribute type")
    common.add_argument("--null-conforms-all", action="store_true",
                        help="let a null value conform to any declared type")
    common.add_argument("--color", choices=("auto", "on", "off"), default="auto")

    parser = _ArgumentParser(prog="tdtypes", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    p = sub.add_parser("check", parents=[common], help="validate files and classify every declaration")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("subtype", parents=[common], help="answer A <= B")
    p.add_argument("file")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_subtype)

    p = sub.add_parser("classify", parents=[common], help="classify types or variables")
    p.add_argument("file")
    p.add_argument("names", nargs="+")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("lattice", parents=[common], help="print the inheritance graph")
    p.add_argument("file")
    p.add_argument("--dot", action="store_true", help="emit Graphviz DOT")
    p.add_argument("--closure", action="store_true", help="include alpha and omega")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("mst", parents=[common], help="most specific type of a value")
    p.add_argument("file")
    p.add_argument("value", nargs="?", help="value literal, e.g. \"TUPLE {E CIRCLE(1)}\"")
    p.add_argument("--tag", help="type tag of a scalar value")
    p.add_argument("--literal", help="literal text for --tag")
    p.add_argument("--least", action="store_true", help="print the least specific type instead")
    p.add_argument("--conforms", metavar="TYPE", help="print whether the value is of TYPE")
    p.set_defaults(func=cmd_mst)
    return parser


def main(argv: Sequence[str] | None = None, *, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    config = CliConfig(
        mode=args.mode,
        strict=args.strict,
        assume_declared=args.assume_declared,
        null_conforms_all=args.null_conforms_all,
        allow_null_attributes=args.allow_null_attributes,
        color=args.color,
    )
    reporter = Reporter(err, config.color)
    try:
        return args.func(args, config, reporter, out)
    except _Exit as exc:
        return exc.code
    except UsageError as exc:
        print(f"tdtypes: error: {exc}", file=err)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
