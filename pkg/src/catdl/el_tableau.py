# ♥♥─── Catdl EL⊥∘ Tableau ─────────────────────────────────
from __future__ import annotations

from dataclasses import dataclass
from collections.abc import Iterable

from loguru import logger

from .terms import RoleTerm, ConceptKind, ConceptTerm, subterms, sort_terms
from .errors import InputRejectedError, BudgetExceededError
from .ontology import (
    CAA,
    RAA,
    EL_BOT_CIRC_KINDS,
    Ontology,
    ensure_nnf,
    first_non_el_term,
    compute_role_closure,
    existential_variants,
)
from .data_models import TableauOptions
from .interpretation import TableauModel, CompletionGraph


@dataclass
class ElTableauState(CompletionGraph):
    """Completion graph of the deterministic EL⊥∘ tableau."""

    equality_blocking = True

    def clash(self) -> int | None:
        """First node whose label holds ⊥."""
        for x in self.nodes:
            if any(c.kind is ConceptKind.BOT for c in self.labels[x]):
                return x
        return None


def holds(concept: ConceptTerm, label: set[ConceptTerm]) -> bool:
    """Membership up to conjunction: ⊤ always holds, a conjunction holds when every conjunct does."""
    if concept.kind is ConceptKind.TOP or concept in label:
        return True
    return concept.kind is ConceptKind.AND and all(holds(c, label) for c in concept.children)


def reject_non_el(concepts: Iterable[ConceptTerm]) -> None:
    for concept in concepts:
        for sub in subterms(concept):
            if sub.kind not in EL_BOT_CIRC_KINDS:
                msg = f"{sub} is outside EL⊥∘ (only and, some, Top, Bot and concept names are allowed)"
                raise InputRejectedError(msg)


# ─── Tableau ───────────────────────────────────────────────────────────────────
class ElTableau:
    """Handles the saturation of one EL⊥∘ tableau; no branching, so one run decides."""

    def __init__(
        self,
        o: Ontology,
        options: TableauOptions | None = None,
        queries: Iterable[ConceptTerm] = (),
    ) -> None:
        if (bad := first_non_el_term(o)) is not None:
            reject_non_el([bad])
        self.options = options or TableauOptions()
        self.ontology = ensure_nnf(o).with_anonymous_individual()
        self.terms = self.ontology.terms
        self.closure = compute_role_closure(self.ontology)
        self.gcis = [(gci.lhs, gci.rhs) for gci in self.ontology.gcis]
        self.relevant = self._relevant_existentials([*self.ontology.concepts(), *queries])
        self.state = ElTableauState(closure=self.closure)
        self.created = 0
        self.witness: str | None = None

    def _relevant_existentials(self, concepts: list[ConceptTerm]) -> dict[ConceptTerm, list[ConceptTerm]]:
        """Existential restrictions worth propagating upwards, indexed by filler."""
        found: dict[ConceptTerm, None] = {}
        for concept in concepts:
            for sub in subterms(concept):
                if sub.kind is ConceptKind.EXISTS:
                    found[sub] = None
            for variant in existential_variants(self.terms, self.closure, concept):
                found[variant] = None
        by_filler: dict[ConceptTerm, list[ConceptTerm]] = {}
        for e in sort_terms(found):
            by_filler.setdefault(e.filler, []).append(e)
        return by_filler

    def _new_node(self, label: list[ConceptTerm], parent: int | None) -> int:
        self.created += 1
        if self.created > self.options.budget_nodes:
            msg = f"node budget of {self.options.budget_nodes} exhausted"
            raise BudgetExceededError(msg, nodes=self.created)
        return self.state.add_node(label, parent)

    def _init(self) -> None:
        state = self.state
        for individual in sorted(self.ontology.individuals):
            state.individual_map[individual] = self._new_node([self.terms.nominal(individual)], None)
        for axiom in self.ontology.axioms:
            match axiom:
                case CAA(individual, concept):
                    state.labels[state.individual_map[individual]].add(concept)
                case RAA(a, b, role):
                    state.add_edge(state.individual_map[a], state.individual_map[b], role)
                case _:
                    pass

    def run(self) -> tuple[bool, TableauModel | None]:
        """Saturate the labels; consistent iff no label receives ⊥."""
        self._init()
        state = self.state
        while True:
            before = sum(map(len, state.labels)) + len(state.labels) + len(state.edges)
            for x in list(state.nodes):
                self._label_rules(x)
            if (node := state.clash()) is not None:
                self.witness = state.root_individual(node)
                logger.debug("⊥ reached at node {} after {} nodes", node, self.created)
                return False, None
            # breadth first: successors are only generated once every label is saturated
            for x in list(state.nodes):
                if state.is_active(x):
                    self._exists_rule(x)
            if sum(map(len, state.labels)) + len(state.labels) + len(state.edges) == before:
                return True, state.to_model()

    def _subsumed(self, roles: set[RoleTerm], role: RoleTerm) -> bool:
        return any(self.closure.subsumes(r, role) for r in roles)

    def _label_rules(self, x: int) -> None:
        state, label = self.state, self.state.labels[x]
        changed = True
        while changed:
            size = len(label)
            for concept in list(label):
                if concept.kind is ConceptKind.AND:
                    label.update(concept.children)
                elif concept.kind is ConceptKind.EXISTS:
                    assert concept.role is not None
                    # lift ∃S'.E to the relevant ∃S.E for S' ⊑* S
                    for e in self.relevant.get(concept.filler, ()):
                        assert e.role is not None
                        if self.closure.subsumes(concept.role, e.role):
                            label.add(e)
            for lhs, rhs in self.gcis:
                if holds(lhs, label):
                    label.add(rhs)
            for y, roles in state.neighbours(x):
                other = state.labels[y]
                for filler, existentials in self.relevant.items():
                    if not holds(filler, other):
                        continue
                    for e in existentials:
                        assert e.role is not None
                        if self._subsumed(roles, e.role):
                            label.add(e)
                for concept in list(other):
                    if concept.kind is not ConceptKind.EXISTS:
                        continue
                    assert concept.role is not None
                    if self.closure.is_transitive(concept.role) and self._subsumed(roles, concept.role):
                        label.add(concept)
            changed = len(label) != size

    def _exists_rule(self, x: int) -> None:
        state = self.state
        for e in sort_terms(c for c in state.labels[x] if c.kind is ConceptKind.EXISTS):
            assert e.role is not None
            neighbours = state.neighbours(x)
            if any(self._subsumed(roles, e.role) and holds(e.filler, state.labels[y]) for y, roles in neighbours):
                continue
            y = self._new_node([e.filler], x)
            state.add_edge(x, y, e.role)


# ─── Entry points ──────────────────────────────────────────────────────────────
def elbot_consistent(o: Ontology, options: TableauOptions | None = None) -> tuple[bool, TableauModel | None]:
    """Decide consistency of an EL⊥∘ ontology; a model comes with every positive answer."""
    return ElTableau(o, options).run()


def elbot_entails(o: Ontology, c: ConceptTerm, d: ConceptTerm, options: TableauOptions | None = None) -> bool:
    """Check ``c ⊑ d`` by pinning ``c`` to a fresh individual and reading ``d`` off its label."""
    reject_non_el([c, d])
    fresh = "_q"
    while fresh in o.individuals:
        fresh += "_"
    tableau = ElTableau(o.with_axioms([CAA(fresh, c)]), options, queries=[d])
    consistent, _ = tableau.run()
    if not consistent:
        return True
    label = tableau.state.labels[tableau.state.individual_map[fresh]]
    return holds(tableau.terms.nnf(d), label)
