from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from catdl.terms import RawOp, RoleKind, RawConcept, ConceptKind, TermFactory, subterms, sort_terms, term_order
from catdl.errors import MalformedTermError
from catdl.interpretation import TableauModel


NAMES = ("A", "B", "C")
ROLES = ("R", "S")

leaves = st.one_of(
    st.sampled_from(NAMES).map(lambda name: RawConcept(RawOp.ATOM, name=name)),
    st.just(RawConcept(RawOp.TOP)),
    st.just(RawConcept(RawOp.BOT)),
)


def _extend(children: st.SearchStrategy[RawConcept]) -> st.SearchStrategy[RawConcept]:
    junctions = st.tuples(st.sampled_from([RawOp.AND, RawOp.OR]), st.lists(children, min_size=2, max_size=3))
    restrictions = st.tuples(st.sampled_from([RawOp.SOME, RawOp.ONLY]), st.sampled_from(ROLES), children)
    return st.one_of(
        junctions.map(lambda p: RawConcept(p[0], args=tuple(p[1]))),
        children.map(lambda c: RawConcept(RawOp.NOT, args=(c,))),
        restrictions.map(lambda p: RawConcept(p[0], role=p[1], args=(p[2],))),
    )


raw_concepts = st.recursive(leaves, _extend, max_leaves=12)

small_models = st.builds(
    lambda concepts, roles: TableauModel(
        domain=(0, 1, 2),
        concept_extension=dict(zip(NAMES, concepts, strict=True)),
        role_extension=dict(zip(ROLES, roles, strict=True)),
        individual_assignment={},
    ),
    st.lists(st.frozensets(st.integers(0, 2)), min_size=3, max_size=3),
    st.lists(st.frozensets(st.tuples(st.integers(0, 2), st.integers(0, 2))), min_size=2, max_size=2),
)


def reorder(raw: RawConcept, rng: random.Random) -> RawConcept:
    """Same expression with every And/Or operand list shuffled."""
    args = [reorder(a, rng) for a in raw.args]
    if raw.op in {RawOp.AND, RawOp.OR}:
        rng.shuffle(args)
    return RawConcept(raw.op, raw.name, raw.role, tuple(args))


# ─── Interning ─────────────────────────────────────────────────────────────────
def test_structurally_equal_terms_are_one_object(terms: TermFactory) -> None:
    r = terms.role("R")
    assert terms.atom("A") is terms.atom("A")
    assert terms.exists(r, terms.atom("A")) is terms.exists(terms.role("R"), terms.atom("A"))
    assert terms.exists(r, terms.atom("A")) is not terms.forall(r, terms.atom("A"))
    sizes = (terms.concept_count, terms.role_count)
    terms.forall(terms.role("R"), terms.atom("A"))
    assert (terms.concept_count, terms.role_count) == sizes


def test_junctions_flatten_deduplicate_and_sort(terms: TermFactory) -> None:
    a, b, c = terms.atom("A"), terms.atom("B"), terms.atom("C")
    nested = terms.and_([c, terms.and_([b, a]), a])
    assert nested is terms.and_([a, b, c])
    assert nested.children == (a, b, c)
    assert terms.or_([a, a]) is a
    assert terms.and_([terms.or_([a, b]), c]).kind is ConceptKind.AND


def test_empty_junction_is_malformed(terms: TermFactory) -> None:
    with pytest.raises(MalformedTermError):
        terms.and_([])
    with pytest.raises(MalformedTermError):
        terms.canonicalize(RawConcept(RawOp.OR))


def test_malformed_raw_nodes(terms: TermFactory) -> None:
    with pytest.raises(MalformedTermError):
        terms.canonicalize(RawConcept(RawOp.NOT, args=(RawConcept(RawOp.TOP), RawConcept(RawOp.BOT))))
    with pytest.raises(MalformedTermError):
        terms.canonicalize(RawConcept(RawOp.SOME, args=(RawConcept(RawOp.TOP),)))
    with pytest.raises(MalformedTermError):
        terms.witness(terms.atom("A"))


def test_term_order_ranks_kinds_then_names(terms: TermFactory) -> None:
    a, b = terms.atom("A"), terms.atom("B")
    assert term_order(terms.top, terms.bot) == -1
    assert term_order(a, b) == -1
    assert term_order(b, a) == 1
    assert term_order(a, a) == 0
    assert sort_terms([terms.not_(a), b, terms.bot]) == [terms.bot, b, terms.not_(a)]
    assert terms.role("R").kind is RoleKind.NAMED


def test_rendering(terms: TermFactory) -> None:
    r = terms.role("R")
    concept = terms.and_([terms.exists(r, terms.atom("B")), terms.forall(r, terms.not_(terms.atom("C")))])
    assert str(concept) == "(and (some R B) (only R (not C)))"
    assert str(terms.nominal("a")) == "{a}"
    assert str(terms.pair("a", "b")) == "{(a,b)}"


# ─── Negation normal form ──────────────────────────────────────────────────────
def test_nnf_pushes_negation_through_restrictions(terms: TermFactory) -> None:
    r, c = terms.role("R"), terms.atom("C")
    assert terms.nnf(terms.not_(terms.exists(r, terms.not_(c)))) is terms.forall(r, c)
    assert terms.nnf(terms.not_(terms.top)) is terms.bot
    assert terms.negate(terms.and_([terms.atom("B"), terms.atom("E")])) is terms.or_(
        [terms.not_(terms.atom("B")), terms.not_(terms.atom("E"))]
    )


@settings(max_examples=300, deadline=None)
@given(raw_concepts, st.randoms(use_true_random=False))
def test_canonical_form_ignores_operand_order(raw: RawConcept, rng: random.Random) -> None:
    terms = TermFactory()
    assert terms.canonicalize(reorder(raw, rng)) is terms.canonicalize(raw)


@settings(max_examples=300, deadline=None)
@given(raw_concepts, raw_concepts, raw_concepts)
def test_canonical_form_is_associative_and_idempotent(x: RawConcept, y: RawConcept, z: RawConcept) -> None:
    terms = TermFactory()
    for op in (RawOp.AND, RawOp.OR):
        left = RawConcept(op, args=(RawConcept(op, args=(x, y)), z))
        right = RawConcept(op, args=(x, RawConcept(op, args=(y, z))))
        assert terms.canonicalize(left) is terms.canonicalize(right)
        assert terms.canonicalize(RawConcept(op, args=(x, x))) is terms.canonicalize(x)


@settings(max_examples=300, deadline=None)
@given(raw_concepts)
def test_junction_operands_are_strictly_ordered(raw: RawConcept) -> None:
    for sub in subterms(TermFactory().canonicalize(raw)):
        if sub.kind in {ConceptKind.AND, ConceptKind.OR}:
            keys = [child.key for child in sub.children]
            assert keys == sorted(set(keys))
            assert all(child.kind is not sub.kind for child in sub.children)


@settings(max_examples=300, deadline=None)
@given(raw_concepts)
def test_nnf_is_idempotent_and_an_involution_under_negation(raw: RawConcept) -> None:
    terms = TermFactory()
    t = terms.nnf(terms.canonicalize(raw))
    assert t.is_nnf
    assert terms.nnf(t) is t
    assert terms.negate(terms.negate(t)) is t


@settings(max_examples=200, deadline=None)
@given(raw_concepts, small_models)
def test_nnf_keeps_the_extension(raw: RawConcept, model: TableauModel) -> None:
    terms = TermFactory()
    t = terms.canonicalize(raw)
    assert model.extension(terms.nnf(t)) == model.extension(t)
    assert model.extension(terms.negate(t)) == frozenset(model.domain) - model.extension(t)


@pytest.mark.slow
@settings(max_examples=10_000, deadline=None)
@given(raw_concepts, st.randoms(use_true_random=False))
def test_term_invariants_on_many_terms(raw: RawConcept, rng: random.Random) -> None:
    terms = TermFactory()
    t = terms.canonicalize(raw)
    assert terms.canonicalize(reorder(raw, rng)) is t
    n = terms.nnf(t)
    assert n.is_nnf
    assert terms.nnf(n) is n
    assert terms.negate(terms.negate(n)) is n
