from __future__ import annotations

from catdl.terms import TermFactory
from catdl.parser import parse_concept, parse_ontology
from catdl.ontology import CAA, ITR, RAA, compute_role_closure
from catdl.interpretation import TableauModel, CompletionGraph, close_roles, transitive_closure


def _model() -> TableauModel:
    return TableauModel(
        domain=(0, 1, 2),
        concept_extension={"A": frozenset({1}), "B": frozenset({1, 2})},
        role_extension={"R": frozenset({(0, 1), (1, 2)})},
        individual_assignment={"a": 0, "b": 1},
    )


def test_transitive_closure() -> None:
    assert transitive_closure([(0, 1), (1, 2), (2, 3)]) == {(0, 1), (1, 2), (2, 3), (0, 2), (1, 3), (0, 3)}
    assert transitive_closure([]) == frozenset()


def test_extensions(terms: TermFactory) -> None:
    model = _model()
    cases = {
        "Top": {0, 1, 2},
        "Bot": set(),
        "(not B)": {0},
        "(and A B)": {1},
        "(or A B)": {1, 2},
        "(some R A)": {0},
        "(only R B)": {0, 1, 2},
        "(only R A)": {0, 2},
    }
    for text, expected in cases.items():
        assert model.extension(parse_concept(text, terms)) == expected, text
    assert model.extension(terms.nominal("b")) == {1}
    assert model.extension(terms.nominal("unknown")) == frozenset()


def test_assertions_and_transitivity(terms: TermFactory) -> None:
    model = _model()
    r = terms.role("R")
    assert model.satisfies(CAA("a", terms.exists(r, terms.atom("A"))))
    assert model.satisfies(RAA("a", "b", r))
    assert not model.satisfies(RAA("b", "a", r))
    assert not model.satisfies(ITR(r))
    assert model.role_pairs(terms.pair("a", "b")) == {(0, 1)}
    assert model.role_pairs(terms.role_bot) == frozenset()


def test_violations_are_listed_in_axiom_order() -> None:
    o = parse_ontology("a : A\nb : (not A)\ntrans R\n")
    model = TableauModel(
        domain=(0, 1),
        concept_extension={"A": frozenset({1})},
        role_extension={},
        individual_assignment={"a": 0, "b": 1},
    )
    assert model.violations(o) == [o.axioms[0], o.axioms[1]]


def test_close_roles_respects_hierarchy_and_transitivity() -> None:
    o = parse_ontology("R <= S\ntrans S\n")
    t = o.terms
    closed = close_roles({t.role("R"): {(0, 1)}, t.role("S"): {(1, 2)}}, compute_role_closure(o))
    assert closed["R"] == {(0, 1)}
    assert closed["S"] == {(0, 1), (1, 2), (0, 2)}


def test_blocking_modes(terms: TermFactory) -> None:
    a, b = terms.atom("A"), terms.atom("B")

    class EqualityGraph(CompletionGraph):
        equality_blocking = True

    for graph, expected in ((CompletionGraph(), 0), (EqualityGraph(), None)):
        root = graph.add_node([a, b])
        child = graph.add_node([a], root)
        graph.add_edge(root, child, terms.role("R"))
        assert graph.blocker(child) == expected
        assert graph.is_active(child) is (expected is None)


def test_model_is_read_off_the_graph(terms: TermFactory) -> None:
    graph = CompletionGraph()
    root = graph.add_node([terms.nominal("a"), terms.atom("A")])
    graph.individual_map["a"] = root
    child = graph.add_node([terms.atom("B")], root)
    grandchild = graph.add_node([terms.atom("B")], child)
    r = terms.role("R")
    graph.add_edge(root, child, r)
    graph.add_edge(child, grandchild, r)
    assert graph.root_individual(grandchild) == "a"
    assert graph.add_edge(root, child, r) is False

    model = graph.to_model()
    assert model.domain == (0, 1)
    assert model.role_extension["R"] == {(0, 1), (1, 1)}
    record = model.to_record()
    assert record.domain == [0, 1]
    assert record.concepts == {"A": [0], "B": [1]}
    assert record.roles == {"R": [(0, 1), (1, 1)]}
    assert record.individuals == {"a": 0}
