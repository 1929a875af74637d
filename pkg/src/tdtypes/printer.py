"""Canonical source rendering of declarations, type references and values."""

from __future__ import annotations

from typing import Iterable

from .model import (
    BuiltIn,
    Declaration,
    Heading,
    NullValue,
    PossrepDef,
    RelationValue,
    ScalarValue,
    TupleValue,
    TypeDef,
    TypeRef,
    Value,
    VarDecl,
)
from .parser import bare_literal_type


def format_type_ref(t: TypeRef) -> str:
    # TypeRef.__str__ already renders surface syntax, nested headings included.
    return str(t)


def format_heading(h: Heading) -> str:
    return str(h)


def _format_possrep(p: PossrepDef) -> str:
    head = "POSSREP " + (f"{p.name} " if p.name else "")
    if p.derived:
        comps = ", ".join(f"{n} = {body}" for n, body in p.components)
    else:
        comps = ", ".join(f"{n} {format_type_ref(t)}" for n, t in p.components)
    if p.constraint is not None:
        comps = f"{comps} CONSTRAINT {p.constraint}" if comps else f"CONSTRAINT {p.constraint}"
    return f"{head}{{{comps}}}"


def format_typedef(td: TypeDef) -> str:
    words = ["TYPE", td.name]
    if td.ordinal:
        words.append("ORDINAL")
    if td.union:
        words.append("UNION")
    lines = [" ".join(words)]
    possreps = [_format_possrep(p) for p in (*td.possreps, *td.derived_possreps)]
    if td.is_root:
        lines.extend("  " + p for p in possreps)
        return "\n".join(lines) + ";"
    inner = [", ".join(td.supertypes)]
    if td.additional_constraint is not None:
        inner.append(f"CONSTRAINT {td.additional_constraint}")
    inner.extend(possreps)
    body = "\n    ".join(inner)
    lines.append(f"  IS {{{body}}}")
    return "\n".join(lines) + ";"


def format_declaration(d: Declaration) -> str:
    if isinstance(d, VarDecl):
        return f"VAR {d.name} {format_type_ref(d.type)};"
    return format_typedef(d)


def format_declarations(decls: Iterable[Declaration]) -> str:
    return "\n".join(format_declaration(d) for d in decls) + "\n"


def format_value(v: Value) -> str:
    if isinstance(v, NullValue):
        return "#"
    if isinstance(v, ScalarValue):
        if isinstance(v.tag, BuiltIn) and v.literal:
            bare = v.literal.lstrip("-")
            if bare and bare_literal_type(bare) == v.tag:
                return v.literal
        return f"{v.tag}({v.literal})"
    if isinstance(v, TupleValue):
        return "TUPLE {" + ", ".join(f"{n} {format_value(x)}" for n, _, x in v) + "}"
    if isinstance(v, RelationValue):
        tuples = sorted(format_value(t) for t in v.body)
        return f"RELATION {v.heading} {{{', '.join(tuples)}}}"
    raise TypeError(f"not a value: {v!r}")
