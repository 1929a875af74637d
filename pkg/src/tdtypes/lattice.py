"""The scalar inheritance graph and its queries.

:func:`build_graph` resolves declarations into a :class:`TypeGraph`: a DAG of
immediate-supertype edges between user-declared and built-in scalar types,
closed by the conceptual top ``alpha`` (above every root) and bottom
``omega`` (below every leaf). Nonscalar queries are delegated to
:mod:`tdtypes.nonscalar`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

from . import nonscalar
from .diagnostics import Diagnostic, Span, TypeGraphError, UnknownTypeError, has_errors
from .model import (
    ALPHA,
    BUILTIN_NAMES,
    NULL,
    OMEGA,
    AlphaType,
    BuiltIn,
    Declaration,
    Declared,
    NullType,
    OmegaType,
    RelationType,
    TupleType,
    TypeDef,
    TypeRef,
    VarDecl,
    contains_type,
)

BUILTINS = tuple(BuiltIn(n) for n in BUILTIN_NAMES)
ORDINAL_BUILTINS = frozenset(BuiltIn(n) for n in ("CHAR", "CHARACTER", "INTEGER", "RATIONAL"))


class NodeKind(enum.Enum):
    REGULAR_UNION = "regular-union"
    DUMMY = "dummy"
    NON_UNION = "non-union"
    BUILT_IN = "built-in"


class Classification(enum.Enum):
    ROOT_SCALAR = "root-scalar"
    NONROOT_SCALAR = "nonroot-scalar"
    DUMMY = "dummy"
    BUILT_IN = "built-in"
    ALPHA = "alpha"
    OMEGA = "omega"


@dataclass(frozen=True)
class BuildOptions:
    inheritance: bool = True
    strict: bool = False
    assume_declared: bool = False


class TypeGraph:
    """Validated, immutable type graph. Build it with :func:`build_graph`."""

    def __init__(
        self,
        types: Mapping[str, TypeDef],
        stubs: Iterable[str],
        variables: Mapping[str, VarDecl],
        parents: Mapping[TypeRef, frozenset[TypeRef]],
        options: BuildOptions,
        declarations: Sequence[Declaration],
        warnings: Sequence[Diagnostic] = (),
    ):
        self.types = dict(types)
        self.stubs = frozenset(stubs)
        self.variables = dict(variables)
        self.options = options
        self.declarations = tuple(declarations)
        self.warnings = list(warnings)
        self._parents = dict(parents)
        children: dict[TypeRef, set[TypeRef]] = {n: set() for n in self._parents}
        for child, ps in self._parents.items():
            for p in ps:
                children[p].add(child)
        self._children = {n: frozenset(c) for n, c in children.items()}
        self._ancestors = _closure(self._parents)
        self._descendants = _closure(self._children)

    # -- node access --------------------------------------------------------

    @property
    def scalar_nodes(self) -> frozenset[TypeRef]:
        """Declared, stub and built-in scalar types, without alpha/omega."""
        return frozenset(self._parents)

    @property
    def declared(self) -> list[Declared]:
        return [Declared(n) for n in self.types]

    def resolve(self, name: str) -> TypeRef:
        """Map a bare name to its node: declared, built-in, alpha, omega or ``#``."""
        if name == "#":
            return NULL
        if name.lower() == "alpha":
            return ALPHA
        if name.lower() == "omega":
            return OMEGA
        if name in self.types or name in self.stubs:
            return Declared(name)
        if name.upper() in BUILTIN_NAMES:
            return BuiltIn(name.upper())
        raise UnknownTypeError(name)

    def _node(self, t: TypeRef | str) -> TypeRef:
        if isinstance(t, str):
            t = self.resolve(t)
        if isinstance(t, (AlphaType, OmegaType)) or t in self._parents:
            return t
        raise UnknownTypeError(t)

    def __contains__(self, t: object) -> bool:
        try:
            self._node(t)  # type: ignore[arg-type]
        except (UnknownTypeError, TypeError):
            return False
        return True

    # -- subtyping ----------------------------------------------------------

    def is_subtype(self, a: TypeRef | str, b: TypeRef | str) -> bool:
        """``a`` is a subtype of ``b``. Nonscalar pairs recurse attribute-wise."""
        if isinstance(a, str):
            a = self.resolve(a)
        if isinstance(b, str):
            b = self.resolve(b)
        if isinstance(a, NullType) or isinstance(b, NullType):
            return a == b
        if a.is_nonscalar or b.is_nonscalar:
            return nonscalar.ns_is_subtype(a, b, self)
        a, b = self._node(a), self._node(b)
        if a == b or a == OMEGA or b == ALPHA:
            return True
        if a == ALPHA or b == OMEGA:
            return False
        return b in self._ancestors[a]

    def immediate_supertypes(self, t: TypeRef | str) -> frozenset[TypeRef]:
        t = self._node(t)
        if t == ALPHA:
            return frozenset()
        if t == OMEGA:
            return frozenset(n for n, c in self._children.items() if not c)
        return self._parents[t] or frozenset({ALPHA})

    def immediate_subtypes(self, t: TypeRef | str) -> frozenset[TypeRef]:
        t = self._node(t)
        if t == OMEGA:
            return frozenset()
        if t == ALPHA:
            return frozenset(n for n, p in self._parents.items() if not p)
        return self._children[t] or frozenset({OMEGA})

    def proper_supertypes(self, t: TypeRef | str) -> frozenset[TypeRef]:
        t = self._node(t)
        if t == ALPHA:
            return frozenset()
        if t == OMEGA:
            return self.scalar_nodes | {ALPHA}
        return self._ancestors[t] | {ALPHA}

    def proper_subtypes(self, t: TypeRef | str) -> frozenset[TypeRef]:
        t = self._node(t)
        if t == OMEGA:
            return frozenset()
        if t == ALPHA:
            return self.scalar_nodes | {OMEGA}
        return self._descendants[t] | {OMEGA}

    def declared_supertypes(self, t: TypeRef | str) -> frozenset[TypeRef]:
        """Proper supertypes other than alpha."""
        t = self._node(t)
        return self._ancestors.get(t, frozenset()) if t != OMEGA else self.scalar_nodes

    # -- classification -----------------------------------------------------

    def is_root(self, t: TypeRef | str) -> bool:
        t = self._node(t)
        if t in (ALPHA, OMEGA):
            return False
        return not self._parents[t]

    def is_leaf(self, t: TypeRef | str) -> bool:
        t = self._node(t)
        if t in (ALPHA, OMEGA):
            return False
        return not self._children[t]

    def kind(self, t: TypeRef | str) -> NodeKind:
        t = self._node(t)
        if t in (ALPHA, OMEGA):
            return NodeKind.DUMMY
        if isinstance(t, BuiltIn):
            return NodeKind.BUILT_IN
        td = self.types.get(t.name)  # type: ignore[union-attr]
        if td is None or not td.union:
            return NodeKind.NON_UNION
        return NodeKind.DUMMY if td.is_dummy else NodeKind.REGULAR_UNION

    def is_union(self, t: TypeRef | str) -> bool:
        return self.kind(t) in (NodeKind.REGULAR_UNION, NodeKind.DUMMY)

    def is_dummy(self, t: TypeRef | str) -> bool:
        return self.kind(t) is NodeKind.DUMMY

    def is_ordinal(self, t: TypeRef | str) -> bool:
        t = self._node(t)
        if isinstance(t, BuiltIn):
            return t in ORDINAL_BUILTINS
        for n in (t, *self._ancestors.get(t, ())):
            td = self.types.get(getattr(n, "name", ""))
            if td is not None and td.ordinal:
                return True
        return False

    def is_stub(self, t: TypeRef | str) -> bool:
        t = self._node(t)
        return isinstance(t, Declared) and t.name in self.stubs

    def classify(self, t: TypeRef | str) -> Classification:
        t = self._node(t)
        if t == ALPHA:
            return Classification.ALPHA
        if t == OMEGA:
            return Classification.OMEGA
        if isinstance(t, BuiltIn):
            return Classification.BUILT_IN
        if self.is_dummy(t):
            return Classification.DUMMY
        return Classification.ROOT_SCALAR if self.is_root(t) else Classification.NONROOT_SCALAR

    def describe(self, t: TypeRef | str) -> str:
        """Human-readable classification label for a type."""
        if isinstance(t, str):
            t = self.resolve(t)
        if isinstance(t, NullType):
            return "null type #"
        if t.is_nonscalar:
            return nonscalar.describe(t, self)
        t = self._node(t)
        if not self.options.inheritance:
            if t in (ALPHA, OMEGA):
                return f"{t} (not used without inheritance)"
            return "built-in scalar type" if isinstance(t, BuiltIn) else "scalar type"
        c = self.classify(t)
        if c is Classification.ALPHA:
            return "dummy type (alpha, maximal scalar type)"
        if c is Classification.OMEGA:
            return "dummy type (omega, minimal scalar type)"
        if c is Classification.BUILT_IN:
            return "built-in scalar type"
        position = "root" if self.is_root(t) else "nonroot"
        if c is Classification.DUMMY:
            return f"dummy type ({position} scalar)"
        if self.is_stub(t):
            return "root scalar type (assumed declared)"
        detail = "regular union" if self.kind(t) is NodeKind.REGULAR_UNION else "non-union"
        return f"{position} scalar type ({detail})"

    def describe_variable(self, name: str) -> str:
        var = self.variables[name]
        t = var.type
        if t.is_scalar and not isinstance(t, NullType):
            return f"variable of type {t}: {self.describe(t)}"
        return self.describe(t)

    # -- derived graphs and export -----------------------------------------

    def without(self, name: str) -> TypeGraph:
        """Rebuild the graph with one type declaration removed."""
        if name not in self.types:
            raise UnknownTypeError(name)
        decls = [d for d in self.declarations if not (isinstance(d, TypeDef) and d.name == name)]
        return build_graph(decls, self.options)

    def edges(self, *, closure: bool = False) -> list[tuple[TypeRef, TypeRef]]:
        """Immediate (child, parent) pairs over declared and stub types."""
        user = {Declared(n) for n in (*self.types, *self.stubs)}
        out = [(c, p) for c, ps in self._parents.items() if c in user for p in ps]
        if closure:
            out += [(n, ALPHA) for n in user if not self._parents[n]]
            out += [(OMEGA, n) for n in user if not self._children[n]]
        return sorted(out, key=lambda e: (str(e[0]), str(e[1])))

    def to_dot(self, *, closure: bool = False) -> str:
        lines = ["digraph types {", "  rankdir=BT;"]
        names = sorted((*self.types, *self.stubs))
        if closure:
            names = ["alpha", *names, "omega"]
        for n in names:
            attrs = []
            if n in ("alpha", "omega") or (n in self.types and self.types[n].is_dummy):
                attrs.append("style=dashed")
            elif n in self.stubs:
                attrs.append("style=dotted")
            suffix = f" [{', '.join(attrs)}]" if attrs else ""
            lines.append(f'  "{n}"{suffix};')
        for c, p in self.edges(closure=closure):
            lines.append(f'  "{c}" -> "{p}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _closure(adj: Mapping[TypeRef, frozenset[TypeRef]]) -> dict[TypeRef, frozenset[TypeRef]]:
    memo: dict[TypeRef, frozenset[TypeRef]] = {}

    def visit(n: TypeRef) -> frozenset[TypeRef]:
        if n not in memo:
            acc: set[TypeRef] = set()
            for m in adj[n]:
                acc.add(m)
                acc |= visit(m)
            memo[n] = frozenset(acc)
        return memo[n]

    for n in adj:
        visit(n)
    return memo


def _find_cycle(parents: Mapping[TypeRef, frozenset[TypeRef]]) -> list[TypeRef] | None:
    WHITE, GREY, BLACK = 0, 1, 2
    color = {n: WHITE for n in parents}
    stack: list[TypeRef] = []

    def visit(n: TypeRef) -> list[TypeRef] | None:
        color[n] = GREY
        stack.append(n)
        for p in sorted(parents[n], key=str):
            if color[p] == GREY:
                return stack[stack.index(p):] + [p]
            if color[p] == WHITE:
                found = visit(p)
                if found:
                    return found
        stack.pop()
        color[n] = BLACK
        return None

    for n in sorted(parents, key=str):
        if color[n] == WHITE:
            found = visit(n)
            if found:
                return found
    return None


def _referenced_types(t: TypeRef) -> Iterable[TypeRef]:
    yield t
    if isinstance(t, (TupleType, RelationType)):
        for _, a in t.heading:
            yield from _referenced_types(a)


def build_graph(decls: Iterable[Declaration], options: BuildOptions | None = None, **kw) -> TypeGraph:
    """Validate declarations and build the type graph.

    Raises :class:`TypeGraphError` carrying every error found. Warnings are
    kept on the returned graph's ``warnings`` list.
    """
    options = replace(options or BuildOptions(), **kw)
    decls = list(decls)
    diags: list[Diagnostic] = []
    err = lambda msg, span=None: diags.append(Diagnostic.error(msg, span))  # noqa: E731

    types: dict[str, TypeDef] = {}
    variables: dict[str, VarDecl] = {}
    for d in decls:
        if isinstance(d, VarDecl):
            if d.name in variables:
                err(f"duplicate variable name {d.name}", d.span)
            else:
                variables[d.name] = d
            continue
        if d.name == "alpha":
            err("type alpha cannot be declared: it is the conceptual supertype of every "
                "scalar type and every built-in would have to be redefined beneath it", d.span)
            continue
        if d.name == "omega":
            err("type omega cannot be declared: it would have to name every leaf type "
                "as an immediate supertype and can never hold a value", d.span)
            continue
        if d.name in BUILTIN_NAMES:
            err(f"built-in type {d.name} cannot be redefined", d.span)
            continue
        if d.name in types:
            err(f"duplicate type name {d.name}: distinct types must have distinct names", d.span)
            continue
        types[d.name] = d

    if not options.inheritance:
        for td in types.values():
            if td.union:
                err(f"type {td.name}: UNION types do not exist without inheritance", td.span)
            if td.supertypes:
                err(f"type {td.name}: IS (subtyping) is not available without inheritance", td.span)
            if not td.possreps:
                err(f"type {td.name}: a user scalar type must have at least one possible "
                    "representation", td.span)

    stubs: set[str] = set()

    def resolve_name(name: str, span: Span | None, what: str) -> bool:
        if name in types or name in stubs or name in BUILTIN_NAMES:
            return True
        if options.assume_declared:
            stubs.add(name)
            diags.append(Diagnostic.note(f"assuming {name} is declared (opaque root type)", span))
            return True
        err(f"unknown {what} {name}", span)
        return False

    def check_ref(t: TypeRef, span: Span | None, where: str) -> None:
        if contains_type(t, ALPHA) or contains_type(t, OMEGA):
            err(f"{where}: alpha and omega cannot be the declared type of anything", span)
        for r in _referenced_types(t):
            if isinstance(r, Declared):
                resolve_name(r.name, span, f"type in {where}:")

    parents: dict[TypeRef, set[TypeRef]] = {}
    for td in types.values():
        node = Declared(td.name)
        parents[node] = set()
        if len(set(td.supertypes)) != len(td.supertypes):
            err(f"type {td.name}: supertype listed twice in IS", td.span)
        for sup in td.supertypes:
            if sup in ("alpha", "omega"):
                err(f"type {td.name}: {sup} cannot be named as a supertype", td.span)
            elif sup in BUILTIN_NAMES:
                err(f"type {td.name}: built-in type {sup} cannot be given user subtypes", td.span)
            elif sup == td.name:
                err(f"type {td.name} cannot be its own supertype (cycle)", td.span)
            elif resolve_name(sup, td.span, f"supertype of {td.name}:"):
                parents[node].add(Declared(sup))
        for p in td.possreps:
            for comp, t in p.components:
                check_ref(t, td.span, f"possrep component {td.name}.{comp}")  # type: ignore[arg-type]
    for var in variables.values():
        check_ref(var.type, var.span, f"variable {var.name}")
        if var.type == OMEGA:
            err(f"variable {var.name}: omega has no values", var.span)

    for s in stubs:
        parents.setdefault(Declared(s), set())
    for b in BUILTINS:
        parents[b] = set()
    frozen = {n: frozenset(ps) for n, ps in parents.items()}

    cycle = _find_cycle(frozen)
    if cycle:
        err("inheritance cycle: " + " -> ".join(str(n) for n in cycle),
            types[cycle[0].name].span if isinstance(cycle[0], Declared) and cycle[0].name in types else None)
    if has_errors(diags):
        raise TypeGraphError(diags)

    ancestors = _closure(frozen)
    children: dict[TypeRef, set[TypeRef]] = {n: set() for n in frozen}
    for c, ps in frozen.items():
        for p in ps:
            children[p].add(c)

    def is_dummy(name: str) -> bool:
        td = types.get(name)
        return td is not None and td.is_dummy

    def strict_or_warn(msg: str, span: Span | None) -> None:
        diags.append(Diagnostic.error(msg, span) if options.strict else Diagnostic.warning(msg, span))

    for td in types.values():
        node = Declared(td.name)
        ps = sorted(frozen[node], key=str)
        for p in ps:
            via = [q for q in ps if q != p and p in ancestors[q]]
            if via:
                err(f"type {td.name}: redundant supertype {p}, already a proper supertype "
                    f"via {via[0]}", td.span)

        if td.union:
            subs = [c for c in children[node] if isinstance(c, Declared) and c.name in types]
            if len(subs) < 2:
                err(f"union type {td.name} requires at least 2 immediate subtypes, "
                    f"found {len(subs)}", td.span)
        if td.is_dummy:
            regular = [p for p in ps if p.name not in stubs and not is_dummy(p.name)]  # type: ignore[union-attr]
            if regular:
                err(f"dummy type {td.name} has regular immediate supertype {regular[0]}; a dummy "
                    "is admitted only beneath dummy types or as a root", td.span)
        elif not td.possreps and not td.derived_possreps and td.additional_constraint is None:
            if td.name not in stubs:
                err(f"regular type {td.name} has no possible representation", td.span)

        if options.inheritance and len(td.supertypes) == 1 and not td.is_dummy:
            ist = td.supertypes[0]
            if is_dummy(ist):
                if not td.possreps:
                    err(f"type {td.name}: its immediate supertype {ist} is a dummy type, so it "
                        "must declare its own possrep", td.span)
            elif ist in types and td.additional_constraint is None:
                strict_or_warn(f"type {td.name}: an additional CONSTRAINT is expected because "
                               f"its immediate supertype {ist} is not a dummy type", td.span)

    if has_errors(diags):
        raise TypeGraphError(diags)
    return TypeGraph(types, stubs, variables, frozen, options, decls, diags)
