# ♥♥─── Catdl Saturation Engine ────────────────────────────
"""Worklist saturation shared by the SH and EL→ rule sets.

Rules that only add arrows fire as soon as one of their premises arrives on the worklist and read the store as it
is at that moment.  Rules that add objects from arrow premises fire in stratified rounds: the monotone rules are
first run to their fixpoint, then every applicable object-creating rule is computed from that fixpoint and applied
at once.  Both the final objects and the final arrows are therefore independent of the firing order.
"""

from __future__ import annotations

import random
from typing import ClassVar
from functools import partial
from dataclasses import field, dataclass
from collections.abc import Callable, Iterable

from loguru import logger

from .terms import Side, RoleTerm, ConceptKind, ConceptTerm, sort_terms
from .ontology import CAA, GCI, RAA, RI, Ontology, RoleClosure, compute_role_closure, existential_variants
from .data_models import Arrow, SaturationTrace
from .category_store import ROLE, CONCEPT, NewObject, CategoryStore


type Rule = Callable[[], None]


@dataclass
class Application:
    """One pending firing of an object-creating rule."""

    tag: str
    premises: tuple[Arrow, ...]
    objects: tuple[ConceptTerm, ...] = ()
    arrows: tuple[tuple[ConceptTerm, ConceptTerm], ...] = ()
    nodes: tuple[ConceptTerm, ...] = ()
    watch: tuple[ConceptTerm, ConceptTerm] | None = field(default=None)


# ─── Engine ────────────────────────────────────────────────────────────────────
class SaturationEngine:
    """Handles store initialization, event dispatch and the rules common to both rule sets."""

    prefix: ClassVar[str] = "R"

    def __init__(self, o: Ontology, *, budget_steps: int | None = None, schedule_seed: int | None = None) -> None:
        self.ontology = self.prepare(o)
        self.terms = self.ontology.terms
        self.closure: RoleClosure = compute_role_closure(self.ontology)
        self.trace = SaturationTrace()
        self.rng = random.Random(schedule_seed) if schedule_seed is not None else None
        self.store = CategoryStore(
            self.terms,
            prefix=self.prefix,
            budget_steps=budget_steps,
            trace=self.trace,
            rng=self.rng,
        )
        self.queries: list[ConceptTerm] = []
        self.rounds = 0
        self._initialized = False

    @classmethod
    def prepare(cls, o: Ontology) -> Ontology:
        return o.with_anonymous_individual()

    def tag(self, name: str) -> str:
        return f"{self.prefix}_{name}"

    @staticmethod
    def _c(x: ConceptTerm, y: ConceptTerm) -> Arrow:
        return Arrow(CONCEPT, x, y)

    @staticmethod
    def _r(x: RoleTerm, y: RoleTerm) -> Arrow:
        return Arrow(ROLE, x, y)

    def has(self, x: ConceptTerm, y: ConceptTerm) -> bool:
        return self.store.has_arrow(CONCEPT, x, y)

    def has_role(self, x: RoleTerm, y: RoleTerm) -> bool:
        return self.store.has_arrow(ROLE, x, y)

    def add(self, x: ConceptTerm, y: ConceptTerm, tag: str, premises: tuple[Arrow, ...] = ()) -> None:
        self.store.add_arrow(CONCEPT, x, y, self.tag(tag), premises)

    def is_bottom(self, x: ConceptTerm) -> bool:
        return self.store.is_bottom(CONCEPT, x)

    def evidence(self, x: ConceptTerm, y: ConceptTerm) -> Arrow:
        """The stored arrow behind ``x → y``: the arrow itself, or ``x → ⊥``."""
        return self._c(x, y if y in self.store.successors(CONCEPT, x) else self.terms.bot)

    # ─── Initialization ────────────────────────────────────────────────────────
    def init_store(self) -> CategoryStore:
        """Register the signature, the axiom subterms, the axiom arrows and the role hierarchy."""
        if self._initialized:
            return self.store
        o, terms, store = self.ontology, self.terms, self.store
        logger.debug("{} init: {} axioms, {} individuals", self.prefix, len(o.axioms), len(o.individuals))
        for name in sorted(o.concept_names):
            store.register_concept(terms.atom(name))
        for name in sorted(o.role_names):
            store.register_role(terms.role(name))
        for individual in sorted(o.individuals):
            store.register_concept(terms.nominal(individual))
        for raa in o.raas:
            pair = terms.pair(raa.a, raa.b)
            store.register_role(pair)
            for side, individual in ((Side.LEFT, raa.a), (Side.RIGHT, raa.b)):
                projection, nominal = terms.proj(side, pair), terms.nominal(individual)
                self.add(projection, nominal, "sub")
                self.add(nominal, projection, "sub")
        for concept in o.concepts():
            self.register_with_variants(concept)

        for axiom in o.axioms:
            match axiom:
                case GCI(lhs, rhs):
                    self.add(lhs, rhs, "sub")
                case CAA(individual, concept):
                    self.add(terms.nominal(individual), concept, "sub")
                case RI(sub, sup):
                    store.add_arrow(ROLE, sub, sup, self.tag("sub"))
                case RAA(a, b, role):
                    store.add_arrow(ROLE, terms.pair(a, b), role, self.tag("sub"))
                case _:
                    pass
        for role, supers in self.closure.sub.items():
            store.register_role(role)
            for sup in sort_terms(supers):
                store.register_role(sup)
                store.add_arrow(ROLE, role, sup, self.tag("sub"))
        self._initialized = True
        return store

    def register_with_variants(self, concept: ConceptTerm) -> None:
        """Register ``concept`` and, for each ∃S.D inside it, ∃S'.D for every transitive S' ⊑* S."""
        self.store.register_concept(concept)
        for variant in existential_variants(self.terms, self.closure, concept):
            self.store.register_concept(variant)

    def add_query(self, concept: ConceptTerm) -> ConceptTerm:
        """Register a query object before saturation."""
        self.init_store()
        self.register_with_variants(concept)
        self.queries.append(concept)
        return concept

    # ─── Main loop ─────────────────────────────────────────────────────────────
    def saturate(self) -> CategoryStore:
        """Apply the rules until none is applicable."""
        self.init_store()
        while True:
            self._drain()
            self.rounds += 1
            if not self.boundary():
                break
        self.trace.finish(self.store.object_count, self.store.arrow_count)
        logger.debug(
            "{} saturated: {} objects, {} arrows, {} firings, {} rounds, {:.3f}s",
            self.prefix,
            self.trace.objects,
            self.trace.arrows,
            self.trace.fired,
            self.rounds,
            self.trace.wall_time,
        )
        return self.store

    def _drain(self) -> None:
        while (event := self.store.pop_event()) is not None:
            rules = self._rules_for(event)
            if self.rng is not None:
                self.rng.shuffle(rules)
            for rule in rules:
                rule()

    def boundary(self) -> bool:
        """Apply the object-creating rules once; returns whether anything was applied."""
        return False

    def apply(self, applications: Iterable[Application]) -> bool:
        changed = False
        for app in applications:
            for concept in app.objects:
                changed |= self.store.register_concept(concept)
            for x, y in app.arrows:
                self.store.register_concept(x)
                self.store.register_concept(y)
                changed |= bool(self.store.add_arrow(CONCEPT, x, y, self.tag(app.tag), app.premises))
            changed |= self.on_applied(app)
        return changed

    def on_applied(self, app: Application) -> bool:
        return False

    # ─── Dispatch ──────────────────────────────────────────────────────────────
    def _rules_for(self, event: Arrow | NewObject) -> list[Rule]:
        if isinstance(event, NewObject):
            if event.side is CONCEPT:
                assert isinstance(event.term, ConceptTerm)
                return self.object_rules(event.term)
            return []
        if event.side is ROLE:
            r, s = event.source, event.target
            assert isinstance(r, RoleTerm)
            assert isinstance(s, RoleTerm)
            if r is self.terms.role_bot:
                return []
            return [partial(self._exists_hierarchy_from_role, r, s), partial(self._exists_transitive_from_role, r, s)]
        x, y = event.source, event.target
        assert isinstance(x, ConceptTerm)
        assert isinstance(y, ConceptTerm)
        return self.arrow_rules(x, y)

    def object_rules(self, t: ConceptTerm) -> list[Rule]:
        match t.kind:
            case ConceptKind.AND:
                return [partial(self._and_decompose, t), partial(self._and_compose_object, t)]
            case ConceptKind.OR:
                return [partial(self._or_compose_object, t)]
            case ConceptKind.EXISTS:
                return [partial(self._exists_object, t)]
            case _:
                return []

    def arrow_rules(self, x: ConceptTerm, y: ConceptTerm) -> list[Rule]:
        if x is self.terms.bot:
            return []
        rules: list[Rule] = []
        if y is self.terms.bot:
            rules.append(partial(self._or_recompute_parents, x))
        else:
            rules += [partial(self._and_compose_arrow, x, y), partial(self._or_compose_arrow, x, y)]
        if x.kind is ConceptKind.OR:
            rules.append(partial(self._or_decompose, x, y))
        if y.is_literal:
            rules.append(partial(self._negation, x, y))
        if x.kind is ConceptKind.PROJ and x.side is Side.RIGHT:
            rules.append(partial(self._exists_hierarchy_from_concept, x, y))
            rules.append(partial(self._exists_transitive_from_concept, x, y))
        return rules

    # ─── Conjunction and disjunction ───────────────────────────────────────────
    def _and_decompose(self, a: ConceptTerm) -> None:
        for child in a.children:
            self.add(a, child, "and_d", (self._c(a, a),))

    def _and_compose(self, x: ConceptTerm, a: ConceptTerm) -> None:
        if self.is_bottom(x) or not all(self.has(x, k) for k in a.children):
            return
        self.add(x, a, "and_c", tuple(self._c(x, k) for k in a.children))

    def _and_compose_arrow(self, x: ConceptTerm, c: ConceptTerm) -> None:
        for a in list(self.store.parents.get(c, ())):
            if a.kind is ConceptKind.AND:
                self._and_compose(x, a)

    def _and_compose_object(self, a: ConceptTerm) -> None:
        for x in list(self.store.predecessors(CONCEPT, a.children[0])):
            assert isinstance(x, ConceptTerm)
            if x is not self.terms.bot:
                self._and_compose(x, a)

    def _or_decompose(self, o: ConceptTerm, y: ConceptTerm) -> None:
        for child in o.children:
            self.add(child, y, "or_d", (self._c(o, y),))

    def _or_compose(self, o: ConceptTerm, y: ConceptTerm) -> None:
        if all(self.has(k, y) for k in o.children):
            premises = tuple(self.evidence(k, y) for k in o.children)
            self.add(o, y, "or_c", premises)

    def _or_compose_arrow(self, c: ConceptTerm, y: ConceptTerm) -> None:
        for o in list(self.store.parents.get(c, ())):
            if o.kind is ConceptKind.OR:
                self._or_compose(o, y)

    def _or_compose_object(self, o: ConceptTerm) -> None:
        live = [k for k in o.children if not self.is_bottom(k)]
        if not live:
            self._or_compose(o, self.terms.bot)
            return
        first, *rest = live
        for y in list(self.store.successors(CONCEPT, first)):
            assert isinstance(y, ConceptTerm)
            if all(self.store.has_arrow(CONCEPT, k, y) for k in rest):
                self._or_compose(o, y)

    def _or_recompute_parents(self, c: ConceptTerm) -> None:
        """A disjunct that reaches ⊥ reaches everything, so its disjunctions may now compose."""
        for o in list(self.store.parents.get(c, ())):
            if o.kind is ConceptKind.OR:
                self._or_compose_object(o)

    # ─── Negation ──────────────────────────────────────────────────────────────
    def _negation(self, x: ConceptTerm, literal: ConceptTerm) -> None:
        if literal.kind is ConceptKind.ATOM:
            atom, negated = literal, self.terms.not_(literal)
        else:
            atom, negated = literal.operand, literal
        if self.has(x, atom) and self.has(x, negated):
            self.add(x, self.terms.bot, "neg", (self._c(x, atom), self._c(x, negated)))

    # ─── Existential restrictions ──────────────────────────────────────────────
    def witness(self, e: ConceptTerm) -> RoleTerm:
        """Witness role of ``e``, introduced with its arrows on first use."""
        w = self.terms.witness(e)
        if self.store.is_registered(ROLE, w):
            return w
        assert e.role is not None
        self.store.register_role(w)
        left, right = self.terms.proj(Side.LEFT, w), self.terms.proj(Side.RIGHT, w)
        premise = (self._c(e, e),)
        self.store.add_arrow(ROLE, w, e.role, self.tag("ex_w"), premise)
        self.add(e, left, "ex_w", premise)
        self.add(left, e, "ex_w", premise)
        self.add(right, e.filler, "ex_w", premise)
        return w

    def _exists_object(self, e: ConceptTerm) -> None:
        self.witness(e)
        assert e.role is not None
        for r in list(self.store.predecessors(ROLE, e.role)):
            assert isinstance(r, RoleTerm)
            self._exists_hierarchy(r, e)
            self._exists_transitive(r, e)

    def _exists_hierarchy(self, r: RoleTerm, e: ConceptTerm) -> None:
        """∃R.C, R' → R, Π_r(R') → C ⟹ Π_ℓ(R') → Π_ℓ(witness of ∃R.C)."""
        assert e.role is not None
        right = self.terms.proj(Side.RIGHT, r)
        if r is self.terms.role_bot or not self.has_role(r, e.role) or not self.has(right, e.filler):
            return
        w = self.witness(e)
        premises = (self._c(e, e), self._r(r, e.role), self._c(right, e.filler))
        self.add(self.terms.proj(Side.LEFT, r), self.terms.proj(Side.LEFT, w), "ex_h", premises)

    def _exists_transitive(self, r: RoleTerm, e: ConceptTerm) -> None:
        """S∘S → S, R' → S, Π_r(R') → ∃S.D ⟹ Π_ℓ(R') → ∃S.D."""
        assert e.role is not None
        if r is self.terms.role_bot or not self.closure.is_transitive(e.role):
            return
        right = self.terms.proj(Side.RIGHT, r)
        if self.has_role(r, e.role) and self.has(right, e):
            premises = (self._r(r, e.role), self._c(right, e))
            self.add(self.terms.proj(Side.LEFT, r), e, "ex_circ", premises)

    def _exists_hierarchy_from_role(self, r: RoleTerm, s: RoleTerm) -> None:
        for e in list(self.store.exists_by_role.get(s, ())):
            self._exists_hierarchy(r, e)

    def _exists_transitive_from_role(self, r: RoleTerm, s: RoleTerm) -> None:
        if self.closure.is_transitive(s):
            for e in list(self.store.exists_by_role.get(s, ())):
                self._exists_transitive(r, e)

    def _exists_hierarchy_from_concept(self, right: ConceptTerm, c: ConceptTerm) -> None:
        assert right.role is not None
        for e in list(self.store.exists_by_filler.get(c, ())):
            self._exists_hierarchy(right.role, e)

    def _exists_transitive_from_concept(self, right: ConceptTerm, e: ConceptTerm) -> None:
        assert right.role is not None
        if e.kind is ConceptKind.EXISTS:
            self._exists_transitive(right.role, e)

    # ─── Shared helpers for the ∀/∃ interaction rules ──────────────────────────
    def transitive_between(self, p: RoleTerm, r: RoleTerm) -> list[RoleTerm]:
        """Transitive S with P → S and S → R."""
        return [s for s in self.closure.transitive_roles if self.has_role(p, s) and self.has_role(s, r)]

    def named_roles_of_pair(self, pair: RoleTerm) -> list[RoleTerm]:
        found = [r for r in self.store.successors(ROLE, pair) if isinstance(r, RoleTerm) and r.is_named]
        return sort_terms(found)

    def individual_applications(self) -> list[Application]:
        """The assertion forms of the ∀/∃ interaction rules, for individuals not below ⊥."""
        terms = self.terms
        found: list[Application] = []
        for a in sorted(self.store.pairs_by_individual):
            nominal = terms.nominal(a)
            if self.is_bottom(nominal):
                continue
            for pair in sort_terms(self.store.pairs_by_individual[a]):
                assert pair.pair is not None
                other = terms.nominal(pair.pair[1])
                foralls = sort_terms(self.store.successors_of_kind(nominal, ConceptKind.FORALL))
                for f in foralls:
                    assert f.role is not None
                    for p in self.named_roles_of_pair(pair):
                        if not self.has_role(p, f.role):
                            continue
                        base = (self._r(pair, p), self._c(nominal, f), self._r(p, f.role))
                        some = terms.exists(p, f.filler)
                        if not (self.has(nominal, some) and self.has(other, f.filler)):
                            found.append(
                                Application("ex_all_i", base, arrows=((nominal, some), (other, f.filler))),
                            )
                        for s in self.transitive_between(p, f.role):
                            inner = terms.forall(s, f.filler)
                            some = terms.exists(p, inner)
                            if self.has(nominal, some) and self.has(other, inner):
                                continue
                            premises = (*base, self._r(p, s), self._r(s, f.role))
                            found.append(
                                Application("ex_circ_all_i", premises, arrows=((nominal, some), (other, inner))),
                            )
        return found
