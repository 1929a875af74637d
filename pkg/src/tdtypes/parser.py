"""Recursive-descent parser for ``TYPE`` / ``VAR`` declarations and value literals.

Grammar accepted in lenient mode (``[]`` optional, ``{}*`` repetition)::

    program        ::= { statement [";" | "."] }*
    statement      ::= type_def | var_def
    type_def       ::= TYPE name [ORDINAL] [UNION] ( is_def | { possrep_def }* )
    is_def         ::= IS "{" name { "," name }* details "}"
    details        ::= { possrep_def }* | CONSTRAINT exp { possrep_def }*
    possrep_def    ::= POSSREP [name] "{" [component { "," component }*]
                       [CONSTRAINT exp] "}"
    component      ::= name type_ref | name "=" exp
    var_def        ::= VAR name type_ref
    type_ref       ::= name | built-in | alpha | omega | "#"
                     | TUPLE heading | RELATION heading
    heading        ::= "{" [name type_ref { "," name type_ref }*] "}"

Expressions (``exp``) are opaque: they are scanned with balanced delimiters
and kept as text.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

from .diagnostics import (
    Diagnostic,
    LexError,
    ParseError,
    Span,
    has_errors,
)
from .lexer import Token, TokenKind, tokenize
from .model import (
    ALPHA,
    BUILTIN_NAMES,
    NULL,
    NULL_VALUE,
    OMEGA,
    BuiltIn,
    Declaration,
    Declared,
    Heading,
    PossrepDef,
    RelationType,
    RelationValue,
    ScalarValue,
    TupleType,
    TupleValue,
    TypeDef,
    TypeRef,
    Value,
    VarDecl,
)

# Grammar productions the parser reports as it recognizes them.
PRODUCTIONS = (
    "null_type",
    "declared_scalar_type",
    "builtin_scalar_type",
    "alpha",
    "omega",
    "user_scalar_root_type_def",
    "user_scalar_nonroot_type_def",
    "user_scalar_root_dummy_type_def",
    "user_scalar_nonroot_dummy_type_def",
    "ordinal",
    "union",
    "possrep_def",
    "possrep_name",
    "possrep_component_def",
    "possrep_constraint_def",
    "is_def",
    "multiple_is_def",
    "additional_constraint_def",
    "derived_possrep_def",
    "derived_possrep_component_def",
    "tuple_type",
    "relation_type",
    "heading",
    "attribute",
    "tuple_maximal_type",
    "relation_maximal_type",
    "tuple_minimal_type",
    "relation_minimal_type",
    "var_def",
)

_OPEN = {"{", "[", "("}
_CLOSE = {"}", "]", ")"}


class ParseResult(NamedTuple):
    declarations: list[Declaration]
    diagnostics: list[Diagnostic]

    @property
    def ok(self) -> bool:
        return not has_errors(self.diagnostics)


class _Abort(Exception):
    def __init__(self, diagnostic: Diagnostic):
        self.diagnostic = diagnostic


class Parser:
    def __init__(
        self,
        tokens: Sequence[Token],
        *,
        strict: bool = False,
        inheritance: bool = True,
        allow_null_attributes: bool = True,
    ):
        if not tokens or tokens[-1].kind is not TokenKind.EOF:
            raise ValueError("token stream must end with EOF")
        self.tokens = tokens
        self.pos = 0
        self.strict = strict
        self.inheritance = inheritance
        self.allow_null_attributes = allow_null_attributes
        self.diagnostics: list[Diagnostic] = []
        self.productions: set[str] = set()

    # -- token helpers ------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind is not TokenKind.EOF:
            self.pos += 1
        return t

    def error(self, expected: str, token: Token | None = None) -> _Abort:
        token = token or self.tok
        return _Abort(Diagnostic.error(f"expected {expected}, found {token.describe()}", token.span))

    def expect_punct(self, ch: str, production: str) -> Token:
        if not self.tok.is_punct(ch):
            raise self.error(f"'{ch}' in {production}")
        return self.advance()

    def expect_keyword(self, kw: str, production: str) -> Token:
        if not self.tok.is_keyword(kw):
            raise self.error(f"{kw} in {production}")
        return self.advance()

    def accept_keyword(self, kw: str) -> bool:
        if self.tok.is_keyword(kw):
            self.advance()
            return True
        return False

    def expect_name(self, production: str) -> Token:
        if self.tok.kind is not TokenKind.IDENTIFIER:
            raise self.error(production)
        return self.advance()

    def warn_or_fail(self, message: str, span: Span) -> None:
        if self.strict:
            self.diagnostics.append(Diagnostic.error(message, span))
        else:
            self.diagnostics.append(Diagnostic.warning(message, span))

    # -- statements ---------------------------------------------------------

    def parse_program(self) -> list[Declaration]:
        decls: list[Declaration] = []
        while self.tok.kind is not TokenKind.EOF:
            if self.tok.is_punct(";"):
                self.advance()
                continue
            start = self.pos
            try:
                decls.append(self.statement())
                self.terminator()
            except _Abort as abort:
                self.diagnostics.append(abort.diagnostic)
                self.synchronize(start)
        return decls

    def statement(self) -> Declaration:
        if self.tok.is_keyword("TYPE"):
            return self.type_def()
        if self.tok.is_keyword("VAR"):
            return self.var_def()
        raise self.error("TYPE or VAR declaration")

    def terminator(self) -> None:
        if self.tok.is_punct(";"):
            self.advance()
        elif self.tok.kind is TokenKind.OPAQUE and self.tok.lexeme == ".":
            if self.strict:
                raise self.error("';' or next declaration")
            self.advance()

    def synchronize(self, start: int) -> None:
        if self.pos == start:
            self.advance()
        while self.tok.kind is not TokenKind.EOF and not self.tok.is_keyword("TYPE", "VAR"):
            self.advance()

    def var_def(self) -> VarDecl:
        start = self.advance()
        name = self.expect_name("variable name in var_def")
        t = self.type_ref()
        self.productions.add("var_def")
        return VarDecl(name.lexeme, t, _span_from(start, name))

    def type_def(self) -> TypeDef:
        start = self.advance()
        name_tok = self.tok
        if name_tok.kind is TokenKind.IDENTIFIER or name_tok.is_keyword("alpha", "omega", *BUILTIN_NAMES):
            self.advance()
            name = name_tok.canonical if name_tok.kind is TokenKind.KEYWORD else name_tok.lexeme
        else:
            raise self.error("user scalar type name after TYPE")
        span = _span_from(start, name_tok)

        ordinal = self.accept_keyword("ORDINAL")
        union = self.accept_keyword("UNION")
        if ordinal:
            self.productions.add("ordinal")
        if union:
            self.productions.add("union")
        elif self.inheritance:
            self.warn_or_fail(
                f"type {name} omits UNION, which the inheritance grammar requires "
                "on every user scalar type definition",
                span,
            )
        if self.strict and not self.inheritance and union:
            self.diagnostics.append(
                Diagnostic.error(f"type {name}: UNION is not allowed without inheritance", span)
            )

        supertypes: tuple[str, ...] = ()
        constraint = None
        if self.tok.is_keyword("IS"):
            supertypes, possreps, constraint = self.is_def(name)
        else:
            possreps = []
            while self.tok.is_keyword("POSSREP"):
                possreps.append(self.possrep_def(allow_derived=False))

        regular = tuple(p for p in possreps if not p.derived)
        derived = tuple(p for p in possreps if p.derived)
        td = TypeDef(
            name=name,
            ordinal=ordinal,
            union=union,
            supertypes=supertypes,
            possreps=regular,
            additional_constraint=constraint,
            derived_possreps=derived,
            span=span,
        )
        if td.is_dummy:
            self.productions.add(
                "user_scalar_root_dummy_type_def" if td.is_root else "user_scalar_nonroot_dummy_type_def"
            )
        else:
            self.productions.add(
                "user_scalar_root_type_def" if td.is_root else "user_scalar_nonroot_type_def"
            )
        return td

    def is_def(self, type_name: str) -> tuple[tuple[str, ...], list[PossrepDef], str | None]:
        is_tok = self.advance()
        self.expect_punct("{", "is_def")
        names: list[str] = []
        if not self._at_type_name():
            raise _Abort(
                Diagnostic.error(
                    f"expected supertype name in is_def, found {self.tok.describe()} "
                    "(IS requires at least one supertype name)",
                    self.tok.span,
                )
            )
        while True:
            t = self.advance()
            names.append(t.canonical if t.kind is TokenKind.KEYWORD else t.lexeme)
            if not self.tok.is_punct(","):
                break
            self.advance()
            if not self._at_type_name():
                raise self.error("supertype name after ',' in is_def")
        self.productions.add("is_def")
        if len(names) >= 2:
            self.productions.add("multiple_is_def")

        constraint = None
        if self.tok.is_keyword("CONSTRAINT"):
            ctok = self.advance()
            constraint = self.opaque("additional constraint def", stop_keywords=("POSSREP",), stop_puncts=("}",))
            self.productions.add("additional_constraint_def")
            if len(names) >= 2 and self.strict:
                self.diagnostics.append(
                    Diagnostic.error(
                        "multiple-inheritance is_def takes only derived possreps, not CONSTRAINT",
                        ctok.span,
                    )
                )
        possreps = []
        while self.tok.is_keyword("POSSREP"):
            possreps.append(self.possrep_def(allow_derived=True))
        if not self.tok.is_punct("}"):
            raise self.error(f"'}}' closing is_def of {type_name}, or POSSREP")
        self.advance()
        return tuple(names), possreps, constraint

    def _at_type_name(self) -> bool:
        return self.tok.kind is TokenKind.IDENTIFIER or self.tok.is_keyword(
            "alpha", "omega", *BUILTIN_NAMES
        )

    def possrep_def(self, *, allow_derived: bool) -> PossrepDef:
        start = self.advance()
        pname = None
        if self.tok.kind is TokenKind.IDENTIFIER:
            pname = self.advance().lexeme
            self.productions.add("possrep_name")
        self.expect_punct("{", "possrep_def")
        components: list[tuple[str, TypeRef | str]] = []
        derived_flags: list[bool] = []
        seen: set[str] = set()
        constraint = None
        while not self.tok.is_punct("}"):
            if self.tok.is_keyword("CONSTRAINT"):
                self.advance()
                constraint = self.opaque("possrep constraint def", stop_puncts=("}",))
                self.productions.add("possrep_constraint_def")
                break
            cname = self.expect_name("possrep component name")
            if cname.lexeme in seen:
                raise _Abort(
                    Diagnostic.error(f"duplicate possrep component {cname.lexeme!r}", cname.span)
                )
            seen.add(cname.lexeme)
            if self.tok.is_punct("="):
                if not allow_derived:
                    raise self.error("component type (derived components need a supertype)")
                self.advance()
                components.append((cname.lexeme, self.opaque("derived possrep component", stop_puncts=(",", "}"))))
                derived_flags.append(True)
                self.productions.add("derived_possrep_component_def")
            else:
                components.append((cname.lexeme, self.type_ref()))
                derived_flags.append(False)
                self.productions.add("possrep_component_def")
            if self.tok.is_punct(","):
                self.advance()
            elif not (self.tok.is_punct("}") or self.tok.is_keyword("CONSTRAINT")):
                raise self.error("',', CONSTRAINT or '}' in possrep_def")
        self.expect_punct("}", "possrep_def")
        derived = any(derived_flags)
        if derived and not all(derived_flags):
            raise _Abort(
                Diagnostic.error("possrep mixes typed components and derived 'name = exp' components", start.span)
            )
        if derived and constraint is not None:
            raise _Abort(Diagnostic.error("a derived possrep cannot carry a CONSTRAINT", start.span))
        self.productions.add("derived_possrep_def" if derived else "possrep_def")
        return PossrepDef(pname, tuple(components), constraint, derived)

    def opaque(
        self,
        production: str,
        *,
        stop_keywords: tuple[str, ...] = (),
        stop_puncts: tuple[str, ...] = (),
    ) -> str:
        """Consume a balanced token run up to a depth-0 stop token; return its text."""
        parts: list[Token] = []
        depth = 0
        while True:
            t = self.tok
            if t.kind is TokenKind.EOF:
                raise self.error(f"end of {production}")
            if depth == 0:
                if t.is_punct(*stop_puncts) or t.is_keyword(*stop_keywords):
                    break
                if t.is_keyword("TYPE", "VAR") or t.is_punct(";"):
                    raise self.error(f"'}}' closing {production}")
            if t.lexeme in _OPEN:
                depth += 1
            elif t.lexeme in _CLOSE:
                if depth == 0:
                    raise self.error(f"balanced expression in {production}")
                depth -= 1
            parts.append(self.advance())
        if not parts:
            raise self.error(f"expression in {production}")
        return join_tokens(parts)

    # -- types --------------------------------------------------------------

    def type_ref(self) -> TypeRef:
        t = self.tok
        if t.is_keyword("#"):
            self.advance()
            self.productions.add("null_type")
            return NULL
        if t.is_keyword("alpha"):
            self.advance()
            self.productions.add("alpha")
            return ALPHA
        if t.is_keyword("omega"):
            self.advance()
            self.productions.add("omega")
            return OMEGA
        if t.is_keyword(*BUILTIN_NAMES):
            self.advance()
            self.productions.add("builtin_scalar_type")
            return BuiltIn(t.canonical)
        if t.is_keyword("TUPLE", "RELATION"):
            self.advance()
            heading = self.heading()
            if t.canonical == "TUPLE":
                self.productions.add("tuple_type")
                result: TypeRef = TupleType(heading)
            else:
                self.productions.add("relation_type")
                result = RelationType(heading)
            kind = t.canonical.lower()
            if heading.degree and all(a == ALPHA for _, a in heading):
                self.productions.add(f"{kind}_maximal_type")
            if heading.degree and all(a == OMEGA for _, a in heading):
                self.productions.add(f"{kind}_minimal_type")
            return result
        if t.is_keyword("GEN"):
            raise self.error("type reference (GEN is internal; write TUPLE {...} or RELATION {...})")
        if t.kind is TokenKind.IDENTIFIER:
            self.advance()
            self.productions.add("declared_scalar_type")
            return Declared(t.lexeme)
        raise self.error("type reference (type name, TUPLE, RELATION, alpha, omega or #)")

    def heading(self) -> Heading:
        self.expect_punct("{", "heading")
        attrs: list[tuple[str, TypeRef]] = []
        seen: set[str] = set()
        while not self.tok.is_punct("}"):
            name = self.tok
            if name.kind is not TokenKind.IDENTIFIER:
                raise self.error("attribute name in heading")
            self.advance()
            if name.lexeme in seen:
                raise _Abort(Diagnostic.error(f"duplicate attribute {name.lexeme!r} in heading", name.span))
            seen.add(name.lexeme)
            at = self.tok
            t = self.type_ref()
            if t == NULL and not self.allow_null_attributes:
                raise _Abort(Diagnostic.error("'#' is not allowed as an attribute type", at.span))
            attrs.append((name.lexeme, t))
            self.productions.add("attribute")
            if self.tok.is_punct(","):
                self.advance()
                if self.tok.is_punct("}"):
                    raise self.error("attribute name after ','")
            elif not self.tok.is_punct("}"):
                raise self.error("',' or '}' in heading")
        self.advance()
        self.productions.add("heading")
        return Heading(attrs)

    # -- values -------------------------------------------------------------

    def value(self) -> Value:
        t = self.tok
        if t.is_keyword("#"):
            self.advance()
            return NULL_VALUE
        if t.is_keyword("TUPLE"):
            self.advance()
            return self.tuple_body()
        if t.is_keyword("RELATION"):
            self.advance()
            heading = self.heading()
            self.expect_punct("{", "relation body")
            body = []
            while not self.tok.is_punct("}"):
                if not self.tok.is_keyword("TUPLE"):
                    raise self.error("TUPLE in relation body")
                self.advance()
                tv = self.tuple_body()
                if tv.names != heading.names:
                    raise _Abort(
                        Diagnostic.error(f"tuple does not match relation heading {heading}", t.span)
                    )
                body.append(tv)
                if self.tok.is_punct(","):
                    self.advance()
                elif not self.tok.is_punct("}"):
                    raise self.error("',' or '}' in relation body")
            self.advance()
            return RelationValue(heading, frozenset(body))
        if (t.kind is TokenKind.IDENTIFIER or t.is_keyword(*BUILTIN_NAMES)) and self.peek().lexeme == "(":
            self.advance()
            tag: TypeRef = BuiltIn(t.canonical) if t.kind is TokenKind.KEYWORD else Declared(t.lexeme)
            self.advance()
            parts = []
            depth = 0
            while not (depth == 0 and self.tok.lexeme == ")"):
                if self.tok.kind is TokenKind.EOF:
                    raise self.error("')' closing selector")
                if self.tok.lexeme in ("(", "{", "["):
                    depth += 1
                elif self.tok.lexeme in ("}", "]") or (self.tok.lexeme == ")" and depth):
                    depth -= 1
                parts.append(self.advance())
            self.advance()
            return ScalarValue(tag, join_tokens(parts) if parts else "")
        if t.kind is TokenKind.IDENTIFIER and t.lexeme.upper() in ("TRUE", "FALSE"):
            self.advance()
            return ScalarValue(BuiltIn("BOOLEAN"), t.lexeme.upper())
        if t.kind is TokenKind.OPAQUE:
            sign = ""
            if t.lexeme == "-" and self.peek().kind is TokenKind.OPAQUE and self.peek().lexeme[0].isdigit():
                self.advance()
                sign = "-"
                t = self.tok
            literal = bare_literal_type(t.lexeme)
            if literal is not None:
                self.advance()
                return ScalarValue(literal, sign + t.lexeme)
        raise self.error("value literal (selector, literal, #, TUPLE or RELATION)")

    def tuple_body(self) -> TupleValue:
        self.expect_punct("{", "tuple value")
        triplets = []
        seen: set[str] = set()
        while not self.tok.is_punct("}"):
            name = self.expect_name("attribute name in tuple value")
            if name.lexeme in seen:
                raise _Abort(Diagnostic.error(f"duplicate attribute {name.lexeme!r} in tuple", name.span))
            seen.add(name.lexeme)
            v = self.value()
            triplets.append((name.lexeme, value_type(v), v))
            if self.tok.is_punct(","):
                self.advance()
            elif not self.tok.is_punct("}"):
                raise self.error("',' or '}' in tuple value")
        self.advance()
        return TupleValue(triplets)


def bare_literal_type(lexeme: str) -> BuiltIn | None:
    """Built-in type of an unadorned literal, or None if it is not one."""
    if lexeme[:1].isdigit():
        return BuiltIn("RATIONAL" if "." in lexeme else "INTEGER")
    if lexeme[:1] in ("'", '"'):
        return BuiltIn("CHAR")
    if lexeme.upper() in ("TRUE", "FALSE"):
        return BuiltIn("BOOLEAN")
    return None


def value_type(v: Value) -> TypeRef:
    """The type a literal spells out for itself (its tag, recursively)."""
    if isinstance(v, ScalarValue):
        return v.tag
    if isinstance(v, TupleValue):
        return TupleType(v.heading)
    if isinstance(v, RelationValue):
        return RelationType(v.heading)
    return NULL


def join_tokens(tokens: Sequence[Token]) -> str:
    """Rebuild source text from tokens, collapsing each gap to one space."""
    out = [tokens[0].lexeme]
    for prev, cur in zip(tokens, tokens[1:]):
        if cur.offset > prev.end or cur.span.line != prev.span.line:
            out.append(" ")
        out.append(cur.lexeme)
    return "".join(out)


def _span_from(start: Token, name: Token) -> Span:
    return Span(start.span.line, start.span.column, name.end - start.offset, start.span.file)


# -- public entry points ------------------------------------------------------


def parse_declarations(
    tokens: Sequence[Token],
    *,
    strict: bool = False,
    inheritance: bool = True,
    allow_null_attributes: bool = True,
) -> ParseResult:
    """Parse a token stream into declarations plus any diagnostics."""
    p = Parser(tokens, strict=strict, inheritance=inheritance, allow_null_attributes=allow_null_attributes)
    decls = p.parse_program()
    return ParseResult(decls, p.diagnostics)


def parse_source(source: str, file: str = "<input>", **options) -> ParseResult:
    try:
        tokens = tokenize(source, file)
    except LexError as exc:
        return ParseResult([], exc.diagnostics)
    return parse_declarations(tokens, **options)


def productions_used(source: str, file: str = "<input>", **options) -> set[str]:
    p = Parser(tokenize(source, file), **options)
    p.parse_program()
    return p.productions


def _parse_single(source: str | Sequence[Token], rule: str, **options):
    tokens = tokenize(source) if isinstance(source, str) else source
    p = Parser(tokens, **options)
    try:
        result = getattr(p, rule)()
        if p.tok.kind is not TokenKind.EOF:
            raise p.error("end of input")
    except _Abort as abort:
        raise ParseError([abort.diagnostic]) from None
    return result


def parse_type_ref(source: str | Sequence[Token], *, allow_null_attributes: bool = True) -> TypeRef:
    """Parse a single type reference, e.g. ``"RELATION {E CIRCLE, R SQUARE}"``."""
    return _parse_single(source, "type_ref", allow_null_attributes=allow_null_attributes)


def parse_value(source: str | Sequence[Token]) -> Value:
    """Parse a value literal such as ``TUPLE {E CIRCLE(1), X 'a'}``."""
    return _parse_single(source, "value")
