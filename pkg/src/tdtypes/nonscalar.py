"""Subtyping and classification for TUPLE and RELATION generated types.

Two generated types are comparable only when they use the same generator and
exactly the same attribute names; the order is then attribute-wise
(covariant in every attribute), recursing through nested headings.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Mapping, Union

from .model import (
    ALPHA,
    OMEGA,
    Heading,
    NullType,
    RelationType,
    TupleType,
    TypeRef,
)

if TYPE_CHECKING:
    from .lattice import TypeGraph

Nonscalar = Union[TupleType, RelationType]


class Relation(enum.Enum):
    EQUAL = "equal"
    SUBTYPE = "subtype"
    SUPERTYPE = "supertype"
    UNRELATED = "unrelated"


@dataclass(frozen=True)
class NonscalarJudgment:
    relation: Relation
    witness: Mapping[str, object] = field(default_factory=dict)


def _same_shape(a: TypeRef, b: TypeRef) -> bool:
    return type(a) is type(b) and isinstance(a, (TupleType, RelationType)) and a.heading.names == b.heading.names  # type: ignore[union-attr]


def ns_is_subtype(a: TypeRef, b: TypeRef, g: TypeGraph) -> bool:
    """Attribute-wise subtyping between two tuple types or two relation types.

    Any other pairing (tuple vs relation, scalar vs nonscalar) is unrelated.
    """
    if not _same_shape(a, b):
        return False
    hb = b.heading  # type: ignore[union-attr]
    return all(g.is_subtype(t, hb[name]) for name, t in a.heading)  # type: ignore[union-attr]


def ns_compare(a: TypeRef, b: TypeRef, g: TypeGraph) -> NonscalarJudgment:
    if not _same_shape(a, b):
        return NonscalarJudgment(Relation.UNRELATED)
    witness: dict[str, object] = {}
    for name, ta in a.heading:  # type: ignore[union-attr]
        tb = b.heading[name]  # type: ignore[union-attr]
        if ta.is_nonscalar and tb.is_nonscalar:
            witness[name] = ns_compare(ta, tb, g)
        else:
            witness[name] = _relation(g.is_subtype(ta, tb), g.is_subtype(tb, ta))
    down, up = ns_is_subtype(a, b, g), ns_is_subtype(b, a, g)
    return NonscalarJudgment(_relation(down, up), witness)


def _relation(down: bool, up: bool) -> Relation:
    if down and up:
        return Relation.EQUAL
    if down:
        return Relation.SUBTYPE
    if up:
        return Relation.SUPERTYPE
    return Relation.UNRELATED


def _rebuild(t: Nonscalar, heading: Heading) -> Nonscalar:
    return type(t)(heading)


def ns_immediate_supertypes(a: Nonscalar, g: TypeGraph) -> frozenset[TypeRef]:
    """Lift exactly one attribute to one of its immediate supertypes."""
    out: set[TypeRef] = set()
    attrs = list(a.heading)
    for i, (name, t) in enumerate(attrs):
        if isinstance(t, NullType):
            continue
        lifts = ns_immediate_supertypes(t, g) if t.is_nonscalar else g.immediate_supertypes(t)  # type: ignore[arg-type]
        for up in lifts:
            out.add(_rebuild(a, Heading(attrs[:i] + [(name, up)] + attrs[i + 1 :])))
    return frozenset(out)


def ns_immediate_subtypes(a: Nonscalar, g: TypeGraph) -> frozenset[TypeRef]:
    out: set[TypeRef] = set()
    attrs = list(a.heading)
    for i, (name, t) in enumerate(attrs):
        if isinstance(t, NullType):
            continue
        lowers = ns_immediate_subtypes(t, g) if t.is_nonscalar else g.immediate_subtypes(t)  # type: ignore[arg-type]
        for down in lowers:
            out.add(_rebuild(a, Heading(attrs[:i] + [(name, down)] + attrs[i + 1 :])))
    return frozenset(out)


def _attr_all(a: Nonscalar, g: TypeGraph, scalar_test, nested_test) -> bool:
    if a.heading.degree == 0:
        return False
    for _, t in a.heading:
        if isinstance(t, NullType):
            return False
        if t.is_nonscalar:
            if not nested_test(t, g):
                return False
        elif not scalar_test(t):
            return False
    return True


def ns_is_union(a: Nonscalar, g: TypeGraph) -> bool:
    """Every attribute type is a union type. Degree 0 is never union."""
    return _attr_all(a, g, g.is_union, ns_is_union)


def ns_is_dummy(a: Nonscalar, g: TypeGraph) -> bool:
    """Every attribute type is a dummy type. Degree 0 is never dummy."""
    return _attr_all(a, g, g.is_dummy, ns_is_dummy)


def ns_is_root(a: Nonscalar, g: TypeGraph) -> bool:
    """No attribute type has a declared proper supertype."""
    for _, t in a.heading:
        if isinstance(t, NullType):
            continue
        if t.is_nonscalar:
            if not ns_is_root(t, g):  # type: ignore[arg-type]
                return False
        elif t == OMEGA or (t != ALPHA and not g.is_root(t)):
            return False
    return True


def _substitute(a: Nonscalar, target: TypeRef) -> Nonscalar:
    def swap(t: TypeRef) -> TypeRef:
        if isinstance(t, NullType):
            return t
        if t.is_nonscalar:
            return _substitute(t, target)  # type: ignore[arg-type]
        return target

    return _rebuild(a, a.heading.map(swap))


def maximal_type(a: Nonscalar, g: TypeGraph | None = None) -> Nonscalar:
    """Replace every attribute type by alpha, recursing into nested headings."""
    return _substitute(a, ALPHA)


def minimal_type(a: Nonscalar, g: TypeGraph | None = None) -> Nonscalar:
    """Replace every attribute type by omega, recursing into nested headings."""
    return _substitute(a, OMEGA)


def describe(t: Nonscalar, g: TypeGraph) -> str:
    generator = "tuple" if isinstance(t, TupleType) else "relation"
    if not g.options.inheritance:
        return f"{generator} type"
    position = "root" if ns_is_root(t, g) else "nonroot"
    if ns_is_dummy(t, g):
        return f"dummy type ({position} nonscalar {generator})"
    if ns_is_union(t, g):
        return f"{position} nonscalar type ({generator}, union)"
    return f"{position} nonscalar type ({generator})"
