from __future__ import annotations

from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from support import LISTINGS, dag_source, fixture_graph, graph_of, random_dag

from tdtypes import (
    NULL,
    NULL_VALUE,
    OMEGA,
    TABLE_DEE,
    TABLE_DUM,
    ZERO_TUPLE,
    Declared,
    Heading,
    LstNotUnique,
    MstNotUnique,
    RelationType,
    RelationValue,
    ScalarValue,
    TupleType,
    TupleValue,
    TypingError,
    UnknownTypeError,
    admits,
    conforms,
    enumerate_values,
    least_specific_type,
    mst,
    ns_is_subtype,
    parse_type_ref,
    parse_value,
    table_dee,
    table_dum,
    zero_tuple,
)


def T(text):
    return parse_type_ref(text)


def V(text):
    return parse_value(text)


def scalar(name):
    return ScalarValue(Declared(name))


@pytest.fixture(scope="module")
def fig():
    return fixture_graph("figure.tdd")


def test_paper_tuple_conforms_to_its_heading():
    g = graph_of("VAR S RELATION {S# S#, SNAME NAME, STATUS INTEGER, CITY CHAR};", assume_declared=True)
    t1 = V((LISTINGS / "13_tuple_t1.tdv").read_text())
    t2 = V((LISTINGS / "14_tuple_t2.tdv").read_text())
    h1 = g.variables["S"].type.heading
    assert conforms(t1, h1, g) and conforms(t2, h1, g)
    r = RelationValue(h1, frozenset([t1, t2]))
    assert r.cardinality == 2 and all(conforms(t, r.heading, g) for t in r.body)


def test_zero_tuple_conforms_to_empty_heading(fig):
    assert conforms(zero_tuple(), Heading(), fig)
    assert not conforms(zero_tuple(), Heading([("E", Declared("ELLIPSE"))]), fig)


def test_inclusive_polymorphism(fig):
    e = Heading([("E", Declared("ELLIPSE"))])
    c = Heading([("E", Declared("CIRCLE"))])
    circle = TupleValue([("E", Declared("CIRCLE"), scalar("CIRCLE"))])
    ellipse = TupleValue([("E", Declared("ELLIPSE"), scalar("ELLIPSE"))])
    assert conforms(circle, e, fig)
    assert not conforms(ellipse, c, fig)


def test_conforms_unknown_declared_type(fig):
    with pytest.raises(UnknownTypeError):
        conforms(TupleValue([("E", Declared("CIRCLE"), scalar("CIRCLE"))]), Heading([("E", Declared("NOPE"))]), fig)


def test_mst_examples(fig):
    assert mst(scalar("ELLIPSE"), fig) == Declared("ELLIPSE")
    assert mst(V("TUPLE {E CIRCLE(1), R SQUARE(2)}"), fig) == T("TUPLE {E CIRCLE, R SQUARE}")
    assert mst(V("RELATION {E ELLIPSE} {}"), fig) == T("RELATION {E omega}")
    assert mst(V("TUPLE {}"), fig) == T("TUPLE {}")
    assert mst(NULL_VALUE, fig) == NULL


def test_relation_mst_is_attribute_join(fig):
    r = V("RELATION {E ELLIPSE} {TUPLE {E CIRCLE(1)}, TUPLE {E NONCIRCLE(2, 1)}}")
    assert mst(r, fig) == T("RELATION {E ELLIPSE}")
    r = V("RELATION {E ELLIPSE} {TUPLE {E CIRCLE(1)}}")
    assert mst(r, fig) == T("RELATION {E CIRCLE}")
    nested = V("RELATION {A RELATION {E ELLIPSE}} {}")
    assert mst(nested, fig) == T("RELATION {A RELATION {E omega}}")


def test_mst_not_unique_reports_candidates():
    g = fixture_graph("diamond_open.tdd")
    r = V("RELATION {F RECTANGLE} {TUPLE {F SQUARE(1)}, TUPLE {F KITE(1)}}")
    with pytest.raises(MstNotUnique) as info:
        mst(r, g)
    assert set(map(str, info.value.candidates)) == {"RECTANGLE", "RHOMBUS"}


def test_mst_of_omega_tag(fig):
    with pytest.raises(TypingError):
        mst(ScalarValue(OMEGA), fig)


def test_least_specific_type(fig):
    assert least_specific_type(scalar("CIRCLE"), fig) == Declared("FIGURE")
    assert least_specific_type(ScalarValue(fig.resolve("INTEGER"), "3"), fig) == fig.resolve("INTEGER")
    chain = fixture_graph("ellipse_union.tdd")
    assert least_specific_type(scalar("CIRCLE"), chain) == Declared("ELLIPSE")
    with pytest.raises(LstNotUnique):
        least_specific_type(scalar("SQUARE"), fixture_graph("diamond.tdd"))


def test_degree_zero_values():
    assert table_dee() != table_dum()
    assert TABLE_DEE.body == {ZERO_TUPLE} and TABLE_DUM.body == frozenset()
    g = graph_of("")
    rel = list(enumerate_values(T("RELATION {}"), g, []))
    assert set(rel) == {TABLE_DEE, TABLE_DUM} and len(rel) == 2
    assert list(enumerate_values(T("TUPLE {}"), g, [])) == [ZERO_TUPLE]


def test_parsed_dee_and_dum():
    assert V((LISTINGS / "15_table_dee.tdv").read_text()) == TABLE_DEE
    assert V((LISTINGS / "16_table_dum.tdv").read_text()) == TABLE_DUM


def test_null_conformance(fig):
    assert admits(NULL, NULL_VALUE, fig)
    assert not admits(Declared("ELLIPSE"), NULL_VALUE, fig)
    assert admits(Declared("ELLIPSE"), NULL_VALUE, fig, null_conforms_all=True)
    assert not admits(NULL, scalar("CIRCLE"), fig)
    t = TupleValue([("X", NULL, NULL_VALUE)])
    assert conforms(t, Heading([("X", NULL)]), fig)
    assert not conforms(t, Heading([("X", Declared("ELLIPSE"))]), fig)
    assert conforms(t, Heading([("X", Declared("ELLIPSE"))]), fig, null_conforms_all=True)


def test_admission_needs_comparable_tag(fig):
    assert not admits(Declared("RECTANGLE"), scalar("CIRCLE"), fig)
    assert admits(Declared("FIGURE"), scalar("SQUARE"), fig)


# -- enumeration-based properties -------------------------------------------------


def _world(rnd):
    parents = random_dag(rnd, max_types=4, max_parents=2)
    g = graph_of(dag_source(parents))
    pool = [scalar(n) for n in parents]
    scalars = [Declared(n) for n in parents]
    names = ["A", "B"][: rnd.randint(0, 2)]
    headings = [Heading(zip(names, combo)) for combo in product(scalars, repeat=len(names))]
    return g, pool, headings


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False))
def test_widening_soundness(rnd):
    g, pool, headings = _world(rnd)
    for h in headings:
        for t in enumerate_values(TupleType(h), g, pool):
            assert conforms(t, h, g)
            for h2 in headings:
                if ns_is_subtype(TupleType(h), TupleType(h2), g):
                    assert conforms(t, h2, g)


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False))
def test_mst_is_below_every_admitting_type(rnd):
    g, pool, headings = _world(rnd)
    scalars = [Declared(n) for n in g.types]
    for v in pool:
        m = mst(v, g)
        assert admits(m, v, g)
        for t in scalars:
            if admits(t, v, g):
                assert g.is_subtype(m, t)
    for h in headings:
        for r in enumerate_values(RelationType(h), g, pool, max_body=2):
            assert all(conforms(t, r.heading, g) for t in r.body)
            try:
                m = mst(r, g)
            except MstNotUnique:
                continue
            assert admits(m, r, g)
            for h2 in headings:
                if admits(RelationType(h2), r, g):
                    assert ns_is_subtype(m, RelationType(h2), g)


def test_only_dee_and_dum_have_degree_zero(fig):
    pool = [scalar("CIRCLE"), scalar("SQUARE")]
    generated = set()
    for t in ("RELATION {}", "RELATION {E ELLIPSE}", "RELATION {E CIRCLE, R SQUARE}"):
        generated |= set(enumerate_values(T(t), fig, pool))
    assert {r for r in generated if r.degree == 0} == {TABLE_DEE, TABLE_DUM}
