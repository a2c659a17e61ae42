from __future__ import annotations

from hypothesis import given, settings, strategies as st

from catdl.terms import TermFactory
from catdl.parser import parse_ontology
from catdl.ontology import (
    ANONYMOUS_INDIVIDUAL,
    CAA,
    GCI,
    ITR,
    RI,
    Ontology,
    ensure_nnf,
    normalize_for_sh,
    first_non_el_term,
    compute_role_closure,
    existential_variants,
)

from conftest import warshall


def test_build_deduplicates_and_closes_the_signature() -> None:
    o = parse_ontology("A <= (some R B)\nA <= (some R B)\na : C\ntrans R\n")
    assert len(o.axioms) == 3
    assert o.concept_names == {"A", "B", "C"}
    assert o.role_names == {"R"}
    assert o.counts_by_kind() == {"GCI": 1, "RI": 0, "ITR": 1, "CAA": 1, "RAA": 0}


def test_anonymous_individual_only_without_individuals() -> None:
    o = parse_ontology("A <= B\nA <= (some R B)\n")
    w = o.with_anonymous_individual()
    assert w.individuals == {ANONYMOUS_INDIVIDUAL}
    assert w.axioms[-1] == CAA(ANONYMOUS_INDIVIDUAL, o.terms.top)
    named = parse_ontology("a : A\n")
    assert named.with_anonymous_individual() is named


def test_normalization_moves_every_gci_under_top(transitive_clash: str) -> None:
    o = normalize_for_sh(parse_ontology(transitive_clash))
    t = o.terms
    gci = o.gcis[0]
    assert gci == GCI(t.top, t.or_([t.not_(t.atom("C")), t.exists(t.role("S"), t.atom("D"))]))
    assert o.sh_normalized
    assert normalize_for_sh(o) is o


def test_normalization_applies_de_morgan() -> None:
    o = parse_ontology("A <= (not (and B E))\n")
    t = o.terms
    expected = t.or_([t.not_(t.atom(name)) for name in ("A", "B", "E")])
    assert normalize_for_sh(o).gcis == [GCI(t.top, expected)]


def test_nnf_keeps_the_gci_shape(medication: str) -> None:
    o = parse_ontology("A <= (not (some R (not C)))\n")
    t = o.terms
    assert ensure_nnf(o).gcis == [GCI(t.atom("A"), t.forall(t.role("R"), t.atom("C")))]
    already = parse_ontology(medication)
    assert ensure_nnf(already).axioms == already.axioms


def test_el_fragment_detection(medication: str) -> None:
    assert first_non_el_term(parse_ontology("A <= (and B (some R Top))\n(and B C) <= Bot\n")) is None
    assert first_non_el_term(parse_ontology(medication)) is not None
    assert first_non_el_term(parse_ontology("A <= (or B C)\n")) is not None


def test_role_closure() -> None:
    o = parse_ontology("R <= S\nS <= T\ntrans R\n(a, b) : R\n")
    t = o.terms
    r, s, u = t.role("R"), t.role("S"), t.role("T")
    closure = compute_role_closure(o)
    assert closure.subsumes(r, u)
    assert closure.subsumes(r, r)
    assert not closure.subsumes(u, r)
    assert closure.subsumes(t.pair("a", "b"), s)
    assert closure.is_transitive(r)
    assert not closure.is_transitive(s)
    assert {(r, s), (r, u)} <= closure.trans_into
    assert closure.transitive_roles == [r]


def test_existential_variants_through_transitive_sub_roles() -> None:
    o = parse_ontology("R <= S\ntrans R\nA <= (some S D)\n")
    t = o.terms
    closure = compute_role_closure(o)
    concept = t.and_([t.atom("A"), t.exists(t.role("S"), t.atom("D"))])
    assert existential_variants(t, closure, concept) == [t.exists(t.role("R"), t.atom("D"))]
    assert existential_variants(t, closure, t.exists(t.role("R"), t.atom("D"))) == []


def test_connected_individuals_and_concepts() -> None:
    o = parse_ontology("(a, b) : R\nc : A\nA <= B\n")
    assert o.connected_individuals() == {"a", "b"}
    assert [str(c) for c in o.concepts()] == ["A", "A", "B"]
    assert isinstance(o, Ontology)
    assert not any(isinstance(a, (RI, ITR)) for a in o.axioms)


# ─── Role closure against brute force ──────────────────────────────────────────
@st.composite
def role_hierarchies(draw: st.DrawFn) -> tuple[int, list[tuple[int, int]], set[int]]:
    n = draw(st.integers(1, 10))
    index = st.integers(0, n - 1)
    return n, draw(st.lists(st.tuples(index, index), max_size=3 * n)), draw(st.sets(index, max_size=n))


@settings(max_examples=300, deadline=None)
@given(role_hierarchies())
def test_role_closure_matches_brute_force(hierarchy: tuple[int, list[tuple[int, int]], set[int]]) -> None:
    n, edges, transitive = hierarchy
    terms = TermFactory()
    roles = [terms.role(f"R{i}") for i in range(n)]
    axioms = [RI(roles[i], roles[j]) for i, j in edges] + [ITR(roles[i]) for i in sorted(transitive)]
    closure = compute_role_closure(Ontology.build(terms, axioms, role_names=[r.name for r in roles]))

    reach = warshall(list(range(n)), set(edges))
    assert {(i, j) for i in range(n) for j in range(n) if closure.subsumes(roles[i], roles[j])} == reach

    # one inclusion step at a time until nothing changes
    naive = {(i, i) for i in transitive}
    while (step := naive | {(s, j) for s, r in naive for i, j in edges if i == r}) != naive:
        naive = step
    assert closure.trans_into == {(roles[s], roles[j]) for s, j in naive}
