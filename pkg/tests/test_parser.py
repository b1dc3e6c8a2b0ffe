from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from isarepair.model import (
    And,
    BOTTOM,
    Concept,
    Definition,
    Exists,
    Forall,
    Not,
    Or,
    Primitive,
    TOP,
    atom,
    name,
    normalize_terminology,
)
from isarepair.parser import (
    ParseError,
    parse_concept,
    parse_missing,
    parse_ontology,
    render_concept,
    serialize_ontology,
)


def _normalize(text: str):
    axioms, roles = parse_ontology(text)
    return normalize_terminology(axioms, roles)


# ---------------------------------------------------------------------------
# ontology parsing
# ---------------------------------------------------------------------------

def test_parse_pizza_counts(pizza_text):
    axioms, roles = parse_ontology(pizza_text)
    assert roles == {"hasTopping"}
    primitives = [a for a in axioms if isinstance(a, Primitive)]
    definitions = [a for a in axioms if isinstance(a, Definition)]
    assert len(primitives) == 9  # two of them bounded only by top
    assert len(definitions) == 5
    # source order is preserved
    assert axioms[0] == Primitive(name("Pizza"), TOP)


def test_parse_smallest_definition():
    axioms, roles = parse_ontology("concept A := top;")
    assert axioms == [Definition(name("A"), TOP)]
    assert roles == set()


def test_parse_undeclared_role_is_diagnosed():
    with pytest.raises(ParseError) as err:
        parse_ontology("concept A := some r . B;")
    diag = err.value.diagnostic
    assert "role 'r' is not declared" in diag.message
    assert diag.line == 1
    assert diag.column == 19


def test_parse_reserved_marker_rejected():
    with pytest.raises(ParseError) as err:
        parse_ontology("concept ~A := top;")
    assert "reserved marker" in err.value.diagnostic.message


def test_parse_reports_first_error_position():
    text = "role r;\nconcept A := some r . (B and);\n"
    with pytest.raises(ParseError) as err:
        parse_ontology(text)
    assert err.value.diagnostic.line == 2


def test_quantifier_binds_unary_expression():
    c = parse_concept("some r . A and B", {"r"})
    assert c == And(Exists("r", atom("A")), atom("B"))
    c = parse_concept("all r . (A or B)", {"r"})
    assert c == Forall("r", Or(atom("A"), atom("B")))


def test_precedence_not_and_or():
    c = parse_concept("not A and B or C", set())
    assert c == Or(And(Not(atom("A")), atom("B")), atom("C"))


def test_parser_is_total_on_fuzz():
    bad = ["concept ;", "role", "concept A :=", "A <= B", "concept A := (B;", "!!"]
    for text in bad:
        with pytest.raises(ParseError):
            parse_ontology(text)


@given(st.text(max_size=120))
def test_parser_never_crashes(text):
    try:
        parse_ontology(text)
    except ParseError as err:
        assert err.diagnostic.line >= 1
        assert err.diagnostic.column >= 1


# ---------------------------------------------------------------------------
# missing-relations parsing
# ---------------------------------------------------------------------------

def test_parse_missing_basic(pizza_missing_text):
    stmts = parse_missing(pizza_missing_text)
    assert [str(s) for s in stmts] == [
        "MyPizza <= FishyMeatyPizza",
        "MyFruttiDiMare <= NonVegetarianPizza",
    ]


def test_parse_missing_empty_input():
    assert parse_missing("") == []
    assert parse_missing("# only a comment\n\n") == []


def test_parse_missing_deduplicates():
    stmts = parse_missing("A <= B\nA <= B\n")
    assert len(stmts) == 1


def test_parse_missing_rejects_self_subsumption():
    with pytest.raises(ParseError):
        parse_missing("A <= A\n")


# ---------------------------------------------------------------------------
# serialization round-trip
# ---------------------------------------------------------------------------

def test_round_trip_pizza(pizza, pizza_text):
    text = serialize_ontology(pizza)
    assert _normalize(text) == pizza


def test_round_trip_empty():
    t = normalize_terminology([], [])
    assert serialize_ontology(t) == ""
    assert _normalize("") == t


def test_round_trip_after_edit(pizza):
    from isarepair.model import add_isa, isa

    t, _ = add_isa(pizza, isa("AnchoviesTopping", "FishTopping"))
    t, _ = add_isa(t, isa("Pizza", "PizzaTopping"))
    assert _normalize(serialize_ontology(t)) == t


def test_round_trip_orphan_primitive():
    t = normalize_terminology([Primitive(name("Lonely"), TOP)], [])
    text = serialize_ontology(t)
    assert "Lonely <= top" in text
    assert _normalize(text) == t


def _expr_strategy() -> st.SearchStrategy[Concept]:
    names = st.sampled_from(["Alpha", "Beta", "Gamma"])
    leaves = st.one_of(names.map(atom), st.just(TOP), st.just(BOTTOM))

    def extend(children: st.SearchStrategy[Concept]) -> st.SearchStrategy[Concept]:
        return st.one_of(
            children.map(Not),
            st.tuples(children, children).map(lambda p: And(*p)),
            st.tuples(children, children).map(lambda p: Or(*p)),
            children.map(lambda c: Exists("r", c)),
            children.map(lambda c: Forall("r", c)),
        )

    return st.recursive(leaves, extend, max_leaves=10)


@given(_expr_strategy())
def test_render_parse_round_trip(c: Concept):
    assert parse_concept(render_concept(c), {"r"}) == c
