# ♥♥─── Catdl SH Tableau ───────────────────────────────────
"""Backtracking tableau for SH with ancestor subset blocking.

Deterministic rules (generating ∃ included) run to a fixpoint before any disjunction is split; the oldest open
disjunction is split first, left disjunct first, with chronological backtracking over copied states.
"""

from __future__ import annotations

from dataclasses import field, dataclass

from loguru import logger

from .terms import RoleTerm, ConceptKind, ConceptTerm, sort_terms
from .errors import ClashedStateError, BudgetExceededError
from .ontology import CAA, RAA, Ontology, ensure_nnf, compute_role_closure
from .data_models import TableauOptions
from .interpretation import TableauModel, CompletionGraph


@dataclass
class TableauState(CompletionGraph):
    """Completion graph plus the disjunction choices taken to reach it."""

    branch_stack: list[tuple[int, ConceptTerm, int]] = field(default_factory=list)

    def copy(self) -> TableauState:
        state = super().copy()
        state.branch_stack = list(self.branch_stack)
        return state

    def clash(self) -> int | None:
        """First node whose label holds ⊥ or a complementary pair of literals."""
        for x in self.nodes:
            label = self.labels[x]
            for concept in label:
                if concept.kind is ConceptKind.BOT:
                    return x
                if concept.kind is ConceptKind.NOT and concept.operand in label:
                    return x
        return None


def extract_model(t: TableauState) -> TableauModel:
    """Interpretation of a complete clash-free state."""
    if (node := t.clash()) is not None:
        msg = f"node {node} holds a clash; no model can be read off"
        raise ClashedStateError(msg)
    return t.to_model()


# ─── Search ────────────────────────────────────────────────────────────────────
class ShTableau:
    """Handles the construction and search of SH tableaux for one ontology."""

    def __init__(self, o: Ontology, options: TableauOptions | None = None) -> None:
        self.options = options or TableauOptions()
        self.ontology = ensure_nnf(o).with_anonymous_individual()
        self.terms = self.ontology.terms
        self.closure = compute_role_closure(self.ontology)
        self.universal = self._internalize()
        self.created = 0
        self.witness: str | None = None

    def _internalize(self) -> list[ConceptTerm]:
        """Every GCI ``E ⊑ F`` as ``NNF(¬E ⊔ F)``, added to each node."""
        found: dict[ConceptTerm, None] = {}
        for gci in self.ontology.gcis:
            if gci.lhs is self.terms.top:
                found[gci.rhs] = None
            else:
                found[self.terms.or_([self.terms.negate(gci.lhs), gci.rhs])] = None
        return list(found)

    def _new_node(self, state: TableauState, label: list[ConceptTerm], parent: int | None) -> int:
        self.created += 1
        if self.created > self.options.budget_nodes:
            msg = f"node budget of {self.options.budget_nodes} exhausted"
            raise BudgetExceededError(msg, nodes=self.created)
        return state.add_node([*label, *self.universal], parent)

    def initial_state(self) -> TableauState:
        state = TableauState(closure=self.closure)
        for individual in sorted(self.ontology.individuals):
            state.individual_map[individual] = self._new_node(state, [self.terms.nominal(individual)], None)
        for axiom in self.ontology.axioms:
            match axiom:
                case CAA(individual, concept):
                    state.labels[state.individual_map[individual]].add(concept)
                case RAA(a, b, role):
                    state.add_edge(state.individual_map[a], state.individual_map[b], role)
                case _:
                    pass
        return state

    def run(self) -> tuple[bool, TableauModel | None]:
        """Search for a complete clash-free tableau."""
        stack = [self.initial_state()]
        while stack:
            state = stack.pop()
            if not self.expand(state):
                node = state.clash()
                if self.witness is None and node is not None:
                    self.witness = state.root_individual(node)
                logger.debug("branch closed at node {} after {} choices", node, len(state.branch_stack))
                continue
            choice = self.open_disjunction(state)
            if choice is None:
                logger.debug("complete tableau with {} nodes, {} created", len(state.labels), self.created)
                return True, extract_model(state)
            x, disjunction = choice
            for index in reversed(range(len(disjunction.children))):
                branch = state.copy()
                branch.labels[x].add(disjunction.children[index])
                branch.branch_stack.append((x, disjunction, index))
                stack.append(branch)
        return False, None

    def open_disjunction(self, state: TableauState) -> tuple[int, ConceptTerm] | None:
        for x in state.nodes:
            if not state.is_active(x):
                continue
            label = state.labels[x]
            for concept in sort_terms(c for c in label if c.kind is ConceptKind.OR):
                if not any(d in label for d in concept.children):
                    return x, concept
        return None

    # ─── Deterministic rules ───────────────────────────────────────────────────
    def expand(self, state: TableauState) -> bool:
        """Apply the deterministic rules until nothing changes; False on a clash."""
        while True:
            before = sum(map(len, state.labels)) + len(state.labels) + len(state.edges)
            for x in list(state.nodes):
                self._label_rules(state, x)
            if state.clash() is not None:
                return False
            for x in list(state.nodes):
                if state.is_active(x):
                    self._exists_rule(state, x)
            if sum(map(len, state.labels)) + len(state.labels) + len(state.edges) == before:
                return True

    def _subsumed(self, roles: set[RoleTerm], role: RoleTerm) -> bool:
        return any(self.closure.subsumes(r, role) for r in roles)

    def _label_rules(self, state: TableauState, x: int) -> None:
        label = state.labels[x]
        pending = list(label)
        while pending:
            concept = pending.pop()
            if concept.kind is ConceptKind.AND:
                for child in concept.children:
                    if child not in label:
                        label.add(child)
                        pending.append(child)
        foralls = sort_terms(c for c in label if c.kind is ConceptKind.FORALL)
        for f in foralls:
            assert f.role is not None
            for y, roles in state.neighbours(x):
                if self._subsumed(roles, f.role):
                    state.labels[y].add(f.filler)
                for s in self.closure.transitive_roles:
                    if self.closure.subsumes(s, f.role) and self._subsumed(roles, s):
                        state.labels[y].add(self.terms.forall(s, f.filler))
        if self.options.forall_exists and foralls:
            self._forall_exists(state, x, foralls)

    def _forall_exists(self, state: TableauState, x: int, foralls: list[ConceptTerm]) -> None:
        """∃P.C with ∀R.D, P ⊑* R: add ∃P.(C ⊓ D), and ∃P.(C ⊓ ∀S.D) through a transitive S."""
        terms, label = self.terms, state.labels[x]
        for e in sort_terms(c for c in label if c.kind is ConceptKind.EXISTS):
            assert e.role is not None
            for f in foralls:
                assert f.role is not None
                if not self.closure.subsumes(e.role, f.role):
                    continue
                extras = [f.filler] if f.filler not in e.filler.conjuncts else []
                for s in self.closure.transitive_roles:
                    inner = terms.forall(s, f.filler)
                    if self.closure.subsumes(e.role, s) and self.closure.subsumes(s, f.role):
                        if inner not in e.filler.conjuncts:
                            extras.append(inner)
                for extra in extras:
                    conjunction = terms.and_([e.filler, extra])
                    label.add(terms.exists(e.role, conjunction))
                    for y, roles in state.neighbours(x):
                        if self._subsumed(roles, e.role) and e.filler in state.labels[y]:
                            state.labels[y].add(conjunction)

    def _exists_rule(self, state: TableauState, x: int) -> None:
        for e in sort_terms(c for c in state.labels[x] if c.kind is ConceptKind.EXISTS):
            assert e.role is not None
            if any(self._subsumed(roles, e.role) and e.filler in state.labels[y] for y, roles in state.neighbours(x)):
                continue
            y = self._new_node(state, [e.filler], x)
            state.add_edge(x, y, e.role)


def tableau_consistent(o: Ontology, options: TableauOptions | None = None) -> tuple[bool, TableauModel | None]:
    """Decide consistency of ``o``; a model comes with every positive answer."""
    return ShTableau(o, options).run()


def tableau_concept_unsat(o: Ontology, c: ConceptTerm, options: TableauOptions | None = None) -> bool:
    """``c`` is unsatisfiable iff the ontology with a fresh instance of ``c`` is inconsistent."""
    fresh = "_q"
    while fresh in o.individuals:
        fresh += "_"
    consistent, _ = tableau_consistent(o.with_axioms([CAA(fresh, c)]), options)
    return not consistent

