from __future__ import annotations

import pytest

from catdl.parser import token_count, parse_concept, parse_ontology
from catdl.el_engine import ElEngine, entails_el, saturate_el, object_bound, is_concept_unsat_el
from catdl.data_models import ElEngineOptions


def test_object_bound() -> None:
    assert object_bound(1) == 12
    assert object_bound(2) == 576


def test_ternary_clash_is_not_seen_through_weakened_universals(ternary_clash: str) -> None:
    o = parse_ontology(ternary_clash)
    assert not is_concept_unsat_el(o, o.terms.atom("A0"))


def test_weakened_disjunction_does_not_distribute(disjunctive_clash: str) -> None:
    o = parse_ontology(disjunctive_clash)
    t = o.terms
    assert not is_concept_unsat_el(o, t.atom("A0"))
    source = parse_concept("(and C1 (or C2 C3))", t)
    target = parse_concept("(or (and C1 C2) (and C1 C3))", t)
    assert not entails_el(o, source, target)


def test_binary_clashes_are_found(transitive_clash: str, medication: str) -> None:
    for text, witness in ((transitive_clash, "a"), (medication, "X")):
        verdict = saturate_el(parse_ontology(text))
        assert verdict.inconsistent
        assert verdict.witness == witness


def test_gci_gives_a_direct_arrow(transitive_clash: str) -> None:
    o = parse_ontology(transitive_clash)
    t = o.terms
    assert entails_el(o, t.atom("C"), t.exists(t.role("S"), t.atom("D")))


@pytest.mark.parametrize(
    ("query", "expected"),
    [
        ("(some R B) <= (some S B)", True),
        ("(some S B) <= (some R B)", False),
        ("(some R (and B C)) <= (some S B)", True),
        ("A <= (some S C)", True),
        ("A <= (some R C)", True),
        ("B <= (some S B)", False),
    ],
)
def test_entailment_through_the_role_hierarchy(query: str, expected: bool) -> None:
    o = parse_ontology("R <= S\nA <= (some R B)\nB <= C\n")
    lhs, rhs = query.split(" <= ")
    t = o.terms
    assert entails_el(o, parse_concept(lhs, t), parse_concept(rhs, t)) is expected


def test_transitive_existentials() -> None:
    o = parse_ontology("A <= (some S B)\nB <= (some S C)\ntrans S\n")
    t = o.terms
    s = t.role("S")
    assert entails_el(o, t.atom("A"), t.exists(s, t.atom("C")))
    assert not entails_el(o, t.atom("C"), t.exists(s, t.atom("A")))


def test_verdict_reports_size_and_bound(transitive_clash: str) -> None:
    o = parse_ontology(transitive_clash)
    verdict = saturate_el(o)
    assert verdict.size == token_count(o) == 26
    assert verdict.bound == object_bound(26)
    assert verdict.object_count == verdict.store.object_count <= verdict.bound


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_schedule_does_not_change_the_result(seed: int, transitive_clash: str) -> None:
    o = parse_ontology(transitive_clash)
    baseline = ElEngine(o).decide()
    shuffled = ElEngine(o, ElEngineOptions(schedule_seed=seed)).decide()
    assert shuffled.consistent == baseline.consistent
    assert shuffled.object_count == baseline.object_count
    assert shuffled.store.arrow_count == baseline.store.arrow_count


@pytest.mark.parametrize(
    "text", ["Top <= Bot\na : (some R A)\n", "Top <= Bot\n(a, b) : R\n", "A <= (some R B)\nTop <= Bot\n"]
)
def test_roles_met_after_top_is_empty(text: str) -> None:
    verdict = saturate_el(parse_ontology(text))
    assert verdict.inconsistent
    assert verdict.witness in {"a", "_w"}


def test_size_is_measured_without_the_anonymous_individual() -> None:
    o = parse_ontology("A <= (some R B)\n")
    verdict = saturate_el(o)
    assert verdict.size == token_count(o)
    assert saturate_el(parse_ontology("")).size == 1
