"""Immutable domain model: type references, headings, declarations, values.

Everything here is plain data. Resolution against a type graph lives in
:mod:`tdtypes.lattice`; typing of values lives in :mod:`tdtypes.values`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

from .diagnostics import DuplicateAttributeError, Span

BUILTIN_NAMES = ("BOOLEAN", "CHAR", "CHARACTER", "INTEGER", "RATIONAL")
RESERVED_NAMES = frozenset({"alpha", "omega", "#", "TUPLE", "RELATION", *BUILTIN_NAMES})


class TypeRef:
    """Base of every type reference."""

    __slots__ = ()
    is_scalar = True

    @property
    def is_nonscalar(self) -> bool:
        return not self.is_scalar


@dataclass(frozen=True)
class Declared(TypeRef):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class BuiltIn(TypeRef):
    name: str

    def __post_init__(self) -> None:
        if self.name not in BUILTIN_NAMES:
            raise ValueError(f"{self.name!r} is not a built-in scalar type")

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class AlphaType(TypeRef):
    def __str__(self) -> str:
        return "alpha"


@dataclass(frozen=True)
class OmegaType(TypeRef):
    def __str__(self) -> str:
        return "omega"


@dataclass(frozen=True)
class NullType(TypeRef):
    """The null-marker type ``#``. It sits outside the subtype order."""

    def __str__(self) -> str:
        return "#"


ALPHA = AlphaType()
OMEGA = OmegaType()
NULL = NullType()


class Heading:
    """A set of ``(attribute name, type)`` pairs with unique names.

    Written order is kept for printing; equality and hashing ignore it.
    """

    __slots__ = ("_attrs", "_index", "_key")

    def __init__(self, attrs: Iterable[tuple[str, TypeRef]] = ()):
        pairs = tuple(attrs)
        index: dict[str, TypeRef] = {}
        for name, t in pairs:
            if not name:
                raise ValueError("attribute name must be non-empty")
            if not isinstance(t, TypeRef):
                raise TypeError(f"attribute {name!r}: expected a TypeRef, got {t!r}")
            if name in index:
                raise DuplicateAttributeError(name)
            index[name] = t
        self._attrs = pairs
        self._index = index
        self._key = frozenset(pairs)

    @property
    def degree(self) -> int:
        return len(self._attrs)

    @property
    def names(self) -> frozenset[str]:
        return frozenset(self._index)

    def __iter__(self) -> Iterator[tuple[str, TypeRef]]:
        return iter(self._attrs)

    def __len__(self) -> int:
        return len(self._attrs)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __getitem__(self, name: str) -> TypeRef:
        return self._index[name]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Heading):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def map(self, fn) -> Heading:
        return Heading((name, fn(t)) for name, t in self._attrs)

    def __repr__(self) -> str:
        return f"Heading({list(self._attrs)!r})"

    def __str__(self) -> str:
        return "{" + ", ".join(f"{n} {t}" for n, t in self._attrs) + "}"


def heading_degree(h: Heading) -> int:
    return h.degree


def heading_equal(a: Heading, b: Heading) -> bool:
    return a == b


@dataclass(frozen=True)
class TupleType(TypeRef):
    heading: Heading
    is_scalar = False

    def __str__(self) -> str:
        return f"TUPLE {self.heading}"


@dataclass(frozen=True)
class RelationType(TypeRef):
    heading: Heading
    is_scalar = False

    def __str__(self) -> str:
        return f"RELATION {self.heading}"


NonscalarType = Union[TupleType, RelationType]


def contains_type(t: TypeRef, target: TypeRef) -> bool:
    """Whether ``target`` occurs anywhere inside ``t`` (``t`` included)."""
    if t == target:
        return True
    if isinstance(t, (TupleType, RelationType)):
        return any(contains_type(a, target) for _, a in t.heading)
    return False


@dataclass(frozen=True)
class PossrepDef:
    """One possible representation.

    Regular possreps map component names to types. Derived possreps, used by
    subtypes, map component names to opaque expression text instead.
    """

    name: str | None
    components: tuple[tuple[str, Union[TypeRef, str]], ...]
    constraint: str | None = None
    derived: bool = False

    def __post_init__(self) -> None:
        seen = set()
        for comp, body in self.components:
            if comp in seen:
                raise DuplicateAttributeError(comp, "possrep component")
            seen.add(comp)
            if self.derived != isinstance(body, str):
                raise TypeError("a possrep mixes typed and derived components")


@dataclass(frozen=True)
class TypeDef:
    """A parsed ``TYPE`` declaration. An empty ``supertypes`` means root."""

    name: str
    ordinal: bool = False
    union: bool = False
    supertypes: tuple[str, ...] = ()
    possreps: tuple[PossrepDef, ...] = ()
    additional_constraint: str | None = None
    derived_possreps: tuple[PossrepDef, ...] = ()
    span: Span | None = field(default=None, compare=False)

    @property
    def is_root(self) -> bool:
        return not self.supertypes

    @property
    def multiple_inheritance(self) -> bool:
        return len(self.supertypes) >= 2

    @property
    def is_dummy(self) -> bool:
        return (
            self.union
            and not self.possreps
            and not self.derived_possreps
            and self.additional_constraint is None
        )


@dataclass(frozen=True)
class VarDecl:
    name: str
    type: TypeRef
    span: Span | None = field(default=None, compare=False)


Declaration = Union[TypeDef, VarDecl]


# -- values -----------------------------------------------------------------


class Value:
    __slots__ = ()


@dataclass(frozen=True)
class ScalarValue(Value):
    """A scalar carrying its most-specific-type tag and opaque literal text."""

    tag: TypeRef
    literal: str = ""

    def __post_init__(self) -> None:
        if not self.tag.is_scalar or isinstance(self.tag, NullType):
            raise TypeError(f"scalar value cannot be tagged {self.tag}")


@dataclass(frozen=True)
class NullValue(Value):
    def __str__(self) -> str:
        return "#"


NULL_VALUE = NullValue()


class TupleValue(Value):
    """A set of ``(attribute, type, value)`` triplets with unique names."""

    __slots__ = ("_triplets", "_index", "_key")

    def __init__(self, triplets: Iterable[tuple[str, TypeRef, Value]] = ()):
        items = tuple(triplets)
        index: dict[str, tuple[TypeRef, Value]] = {}
        for name, t, v in items:
            if name in index:
                raise DuplicateAttributeError(name)
            index[name] = (t, v)
        self._triplets = items
        self._index = index
        self._key = frozenset(items)

    @property
    def triplets(self) -> tuple[tuple[str, TypeRef, Value], ...]:
        return self._triplets

    @property
    def degree(self) -> int:
        return len(self._triplets)

    @property
    def names(self) -> frozenset[str]:
        return frozenset(self._index)

    @property
    def heading(self) -> Heading:
        return Heading((n, t) for n, t, _ in self._triplets)

    def value(self, name: str) -> Value:
        return self._index[name][1]

    def __iter__(self):
        return iter(self._triplets)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TupleValue):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"TupleValue({list(self._triplets)!r})"


@dataclass(frozen=True)
class RelationValue(Value):
    heading: Heading
    body: frozenset[TupleValue] = frozenset()

    def __post_init__(self) -> None:
        body = frozenset(self.body)
        object.__setattr__(self, "body", body)
        for t in body:
            if t.names != self.heading.names:
                raise ValueError(
                    f"tuple attributes {sorted(t.names)} do not match heading {self.heading}"
                )

    @property
    def degree(self) -> int:
        return self.heading.degree

    @property
    def cardinality(self) -> int:
        return len(self.body)
