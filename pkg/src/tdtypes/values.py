"""Typing of values: conformance, most and least specific types.

A scalar value is admitted by type ``T`` when its tag is a subtype of ``T``.
Tuple and relation values are typed attribute by attribute.
"""

from __future__ import annotations

import itertools
from typing import TYPE_CHECKING, Iterable, Iterator

from .diagnostics import LstNotUnique, MstNotUnique, TypingError, UnknownTypeError
from .model import (
    ALPHA,
    NULL,
    NULL_VALUE,
    OMEGA,
    Heading,
    NullType,
    NullValue,
    RelationType,
    RelationValue,
    ScalarValue,
    TupleType,
    TupleValue,
    TypeRef,
    Value,
)
from .nonscalar import minimal_type
from .parser import value_type

if TYPE_CHECKING:
    from .lattice import TypeGraph

ZERO_TUPLE = TupleValue()
TABLE_DEE = RelationValue(Heading(), frozenset({ZERO_TUPLE}))
TABLE_DUM = RelationValue(Heading(), frozenset())


def zero_tuple() -> TupleValue:
    return ZERO_TUPLE


def table_dee() -> RelationValue:
    return TABLE_DEE


def table_dum() -> RelationValue:
    return TABLE_DUM


def _minimal(g: TypeGraph, types: Iterable[TypeRef]) -> set[TypeRef]:
    pool = set(types)
    return {t for t in pool if not any(u != t and g.is_subtype(u, t) for u in pool)}


def _maximal(g: TypeGraph, types: Iterable[TypeRef]) -> set[TypeRef]:
    pool = set(types)
    return {t for t in pool if not any(u != t and g.is_subtype(t, u) for u in pool)}


def _scalar_mst(v: ScalarValue, g: TypeGraph) -> TypeRef:
    tag = v.tag
    if tag not in g:
        raise UnknownTypeError(tag)
    if tag == OMEGA:
        raise TypingError("omega has no values; no value can be tagged omega")
    # The tag is the most specific type by construction: no proper subtype of
    # the tag can admit a value carrying it.
    return tag


def join(types: Iterable[TypeRef], g: TypeGraph) -> TypeRef:
    """Least common supertype. Raises MstNotUnique if it is ambiguous."""
    ts = list(dict.fromkeys(types))
    if not ts:
        raise ValueError("join of no types")
    if len(ts) == 1:
        return ts[0]
    first = ts[0]
    if any(isinstance(t, NullType) for t in ts):
        raise TypingError("the null marker has no common supertype with other types")
    if first.is_nonscalar:
        if not all(type(t) is type(first) and t.heading.names == first.heading.names for t in ts):  # type: ignore[union-attr]
            raise TypingError("cannot join differently shaped generated types")
        heading = Heading(
            (name, join([t.heading[name] for t in ts], g)) for name, _ in first.heading  # type: ignore[union-attr]
        )
        return type(first)(heading)  # type: ignore[call-arg]
    uppers = [u for u in (*g.scalar_nodes, ALPHA) if all(g.is_subtype(t, u) for t in ts)]
    best = _minimal(g, uppers)
    if len(best) == 1:
        return best.pop()
    raise MstNotUnique(best)


def mst(v: Value, g: TypeGraph) -> TypeRef:
    """Most specific type of ``v``."""
    if isinstance(v, NullValue):
        return NULL
    if isinstance(v, ScalarValue):
        return _scalar_mst(v, g)
    if isinstance(v, TupleValue):
        return TupleType(Heading((name, mst(x, g)) for name, _, x in v))
    if isinstance(v, RelationValue):
        attrs = []
        for name, declared in v.heading:
            values = [t.value(name) for t in v.body]
            if not values:
                # An attribute of an empty relation has most specific type omega.
                if isinstance(declared, NullType):
                    attrs.append((name, NULL))
                elif declared.is_nonscalar:
                    attrs.append((name, minimal_type(declared)))  # type: ignore[arg-type]
                else:
                    attrs.append((name, OMEGA))
                continue
            kinds = [mst(x, g) for x in values]
            if any(isinstance(k, NullType) for k in kinds) and not all(isinstance(k, NullType) for k in kinds):
                attrs.append((name, declared))
            else:
                attrs.append((name, join(kinds, g)))
        return RelationType(Heading(attrs))
    raise TypeError(f"not a value: {v!r}")


def _lst_type(t: TypeRef, g: TypeGraph) -> TypeRef:
    if isinstance(t, NullType):
        return t
    if t.is_nonscalar:
        return type(t)(t.heading.map(lambda a: _lst_type(a, g)))  # type: ignore[union-attr, call-arg]
    if t == OMEGA:
        return OMEGA
    if t == ALPHA:
        raise TypingError("no declared type lies above alpha")
    admitting = {t, *g.declared_supertypes(t)}
    tops = _maximal(g, admitting)
    if len(tops) == 1:
        return tops.pop()
    raise LstNotUnique(tops)


def least_specific_type(v: Value, g: TypeGraph) -> TypeRef:
    """The unique maximal declared type (alpha excluded) admitting ``v``."""
    if isinstance(v, NullValue):
        return NULL
    if isinstance(v, ScalarValue):
        if v.tag not in g:
            raise UnknownTypeError(v.tag)
        return _lst_type(v.tag, g)
    if isinstance(v, TupleValue):
        return TupleType(Heading((name, least_specific_type(x, g)) for name, _, x in v))
    if isinstance(v, RelationValue):
        return _lst_type(RelationType(v.heading), g)
    raise TypeError(f"not a value: {v!r}")


def admits(t: TypeRef, v: Value, g: TypeGraph, *, null_conforms_all: bool = False) -> bool:
    """Whether ``v`` is a value of type ``t``."""
    if isinstance(v, NullValue):
        return isinstance(t, NullType) or null_conforms_all
    if isinstance(t, NullType):
        return False
    if isinstance(v, TupleValue):
        return isinstance(t, TupleType) and conforms(v, t.heading, g, null_conforms_all=null_conforms_all)
    if isinstance(v, RelationValue):
        if not isinstance(t, RelationType) or t.heading.names != v.heading.names:
            return False
        return all(conforms(x, t.heading, g, null_conforms_all=null_conforms_all) for x in v.body)
    return g.is_subtype(v.tag, t)  # type: ignore[union-attr]


def conforms(t: TupleValue, h: Heading, g: TypeGraph, *, null_conforms_all: bool = False) -> bool:
    """Whether a tuple value conforms to heading ``h``."""
    if t.names != h.names:
        return False
    for name, declared in h:
        if declared not in g and declared.is_scalar and not isinstance(declared, NullType):
            raise UnknownTypeError(declared)
    return all(admits(h[name], x, g, null_conforms_all=null_conforms_all) for name, _, x in t)


def relation_is_well_typed(r: RelationValue, g: TypeGraph) -> bool:
    return all(conforms(t, r.heading, g) for t in r.body)


def enumerate_values(t: TypeRef, g: TypeGraph, scalars: Iterable[ScalarValue], *, max_body: int | None = None) -> Iterator[Value]:
    """Every value of type ``t`` buildable from a finite pool of scalar values.

    Tuple values range over the product of their attribute value sets;
    relation values over all subsets (up to ``max_body`` tuples) of the
    matching tuples.
    """
    pool = list(dict.fromkeys(scalars))
    yield from _enumerate(t, g, pool, max_body)


def _enumerate(t: TypeRef, g: TypeGraph, pool: list[ScalarValue], max_body: int | None) -> Iterator[Value]:
    if isinstance(t, NullType):
        yield NULL_VALUE
    elif isinstance(t, TupleType):
        names = [n for n, _ in t.heading]
        columns = [list(_enumerate(a, g, pool, max_body)) for _, a in t.heading]
        for combo in itertools.product(*columns):
            yield TupleValue((n, value_type(x), x) for n, x in zip(names, combo))
    elif isinstance(t, RelationType):
        tuples = list(_enumerate(TupleType(t.heading), g, pool, max_body))
        limit = len(tuples) if max_body is None else min(max_body, len(tuples))
        for k in range(limit + 1):
            for body in itertools.combinations(tuples, k):
                yield RelationValue(t.heading, frozenset(body))  # type: ignore[arg-type]
    else:
        for v in pool:
            if g.is_subtype(v.tag, t):
                yield v

