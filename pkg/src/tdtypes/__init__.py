"""Parser and type checker for Tutorial D style type definitions.

Covers scalar inheritance lattices closed by ``alpha``/``omega``, attribute-wise
subtyping of TUPLE/RELATION types, most/least specific types of values, and
the null-marker type ``#``.
"""

from .diagnostics import (
    Diagnostic,
    LexError,
    LstNotUnique,
    MstNotUnique,
    ParseError,
    Severity,
    Span,
    TDError,
    TypeGraphError,
    TypingError,
    UnknownTypeError,
)
from .lattice import BuildOptions, Classification, NodeKind, TypeGraph, build_graph
from .lexer import Token, TokenKind, tokenize
from .model import (
    ALPHA,
    NULL,
    NULL_VALUE,
    NullValue,
    OMEGA,
    BuiltIn,
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
    VarDecl,
    heading_degree,
    heading_equal,
)
from .nonscalar import (
    maximal_type,
    minimal_type,
    ns_compare,
    ns_immediate_subtypes,
    ns_immediate_supertypes,
    ns_is_dummy,
    ns_is_root,
    ns_is_subtype,
    ns_is_union,
)
from .parser import parse_declarations, parse_source, parse_type_ref, parse_value
from .printer import format_declarations, format_type_ref, format_value
from .values import (
    TABLE_DEE,
    TABLE_DUM,
    ZERO_TUPLE,
    admits,
    conforms,
    enumerate_values,
    join,
    least_specific_type,
    mst,
    table_dee,
    table_dum,
    zero_tuple,
)

__version__ = "0.1.0"
