# ♥♥─── Catdl SH Engine ────────────────────────────────────
from __future__ import annotations

from functools import partial
from dataclasses import dataclass

from loguru import logger

from .terms import ConceptKind, ConceptTerm, subterms, sort_terms
from .ontology import CAA, Ontology, normalize_for_sh
from .saturation import Rule, Application, SaturationEngine
from .data_models import SaturationTrace, ShEngineOptions
from .category_store import CategoryStore


@dataclass
class ShVerdict:
    """Outcome of an SH saturation run."""

    consistent: bool
    witness: str | None
    store: CategoryStore
    trace: SaturationTrace

    @property
    def inconsistent(self) -> bool:
        return not self.consistent


# ─── Engine ────────────────────────────────────────────────────────────────────
class ShEngine(SaturationEngine):
    """Saturates a normalized SH ontology with the full rule set, distribution included."""

    prefix = "R"

    def __init__(self, o: Ontology, options: ShEngineOptions | None = None) -> None:
        self.options = options or ShEngineOptions()
        super().__init__(o, budget_steps=self.options.budget_steps, schedule_seed=self.options.schedule_seed)
        self.eligible_ors: set[ConceptTerm] = {
            sub for concept in self.ontology.concepts() for sub in subterms(concept) if sub.kind is ConceptKind.OR
        }
        self.distributed: set[ConceptTerm] = set()
        self.branch_nodes: set[ConceptTerm] = set()

    @classmethod
    def prepare(cls, o: Ontology) -> Ontology:
        return normalize_for_sh(o).with_anonymous_individual()

    def add_query(self, concept: ConceptTerm) -> ConceptTerm:
        concept = self.terms.nnf(concept)
        self.eligible_ors |= {sub for sub in subterms(concept) if sub.kind is ConceptKind.OR}
        return super().add_query(concept)

    # ─── Universal monotonicity ────────────────────────────────────────────────
    def object_rules(self, t: ConceptTerm) -> list[Rule]:
        rules = super().object_rules(t)
        if t.kind is ConceptKind.FORALL:
            rules.append(partial(self._forall_object, t))
        return rules

    def arrow_rules(self, x: ConceptTerm, y: ConceptTerm) -> list[Rule]:
        rules = super().arrow_rules(x, y)
        if x is not self.terms.bot and self.store.forall_by_filler.get(x):
            rules.append(partial(self._forall_monotone, x, y))
        return rules

    def _forall_monotone(self, c: ConceptTerm, d: ConceptTerm) -> None:
        """C → D ⟹ ∀R.C → ∀R.D."""
        for low in list(self.store.forall_by_filler.get(c, ())):
            assert low.role is not None
            if d is self.terms.bot:
                targets = list(self.store.forall_by_role.get(low.role, ()))
            else:
                targets = [f for f in self.store.forall_by_filler.get(d, ()) if f.role is low.role]
            for high in targets:
                self.add(low, high, "all_mono", (self._c(c, d),))

    def _forall_object(self, f: ConceptTerm) -> None:
        assert f.role is not None
        for other in list(self.store.forall_by_role.get(f.role, ())):
            if self.has(other.filler, f.filler):
                self.add(other, f, "all_mono", (self.evidence(other.filler, f.filler),))
            if self.has(f.filler, other.filler):
                self.add(f, other, "all_mono", (self.evidence(f.filler, other.filler),))

    # ─── Rounds of object-creating rules ───────────────────────────────────────
    def node_like(self) -> list[ConceptTerm]:
        """Objects that stand for a domain element: nominals, existential fillers, queries and branches."""
        if self.options.all_objects:
            return [x for x in sort_terms(self.store.concept_objects()) if not self.is_bottom(x)]
        found = {self.terms.nominal(a) for a in self.ontology.individuals}
        found |= {e.filler for e in self.store.concept_objects() if e.kind is ConceptKind.EXISTS}
        found |= set(self.queries) | self.branch_nodes
        return [x for x in sort_terms(found) if not self.is_bottom(x)]

    def boundary(self) -> bool:
        if self.apply(self.forall_exists_applications()):
            return True
        return self.options.distribution and self.apply(self.distribution_applications())

    def forall_exists_applications(self) -> list[Application]:
        """∃P.C and ∀R.D with P → R give ∃P.(C ⊓ D), and ∃P.(C ⊓ ∀S.D) through a transitive S."""
        terms = self.terms
        found: list[Application] = []
        for x in self.node_like():
            foralls = sort_terms(self.store.successors_of_kind(x, ConceptKind.FORALL))
            if not foralls:
                continue
            for e in sort_terms(self.store.successors_of_kind(x, ConceptKind.EXISTS)):
                assert e.role is not None
                for f in foralls:
                    assert f.role is not None
                    if not self.has_role(e.role, f.role):
                        continue
                    premises = (self._c(x, e), self._c(x, f), self._r(e.role, f.role))
                    target = terms.exists(e.role, terms.and_([e.filler, f.filler]))
                    if not self.has(x, target):
                        found.append(Application("ex_all", premises, arrows=((x, target),)))
                    for s in self.transitive_between(e.role, f.role):
                        inner = terms.forall(s, f.filler)
                        target = terms.exists(e.role, terms.and_([e.filler, inner]))
                        if not self.has(x, target):
                            steps = (*premises, self._r(e.role, s), self._r(s, f.role))
                            found.append(Application("ex_circ_all", steps, arrows=((x, target),)))
        return found + self.individual_applications()

    def distribution_applications(self) -> list[Application]:
        """Distribute each node-like X over the least disjunction it reaches without reaching a disjunct."""
        found: list[Application] = []
        for x in self.node_like():
            if x in self.distributed:
                continue
            pending = [
                o
                for o in sort_terms(self.store.successors_of_kind(x, ConceptKind.OR))
                if o in self.eligible_ors and not any(self.has(x, d) for d in o.children)
            ]
            if not pending:
                continue
            o = pending[0]
            branches = tuple(self.terms.and_([x, d]) for d in o.children)
            target = self.terms.or_(branches)
            found.append(Application("dist", (self._c(x, o),), arrows=((x, target),), nodes=branches))
        return found

    def on_applied(self, app: Application) -> bool:
        if app.tag != "dist":
            return False
        self.distributed.add(app.arrows[0][0])
        self.branch_nodes.update(app.nodes)
        return True

    # ─── Verdict ───────────────────────────────────────────────────────────────
    def witness_individual(self) -> str | None:
        """Least individual whose nominal reaches ⊥."""
        for a in sorted(self.ontology.individuals):
            if self.is_bottom(self.terms.nominal(a)):
                return a
        return None

    def decide(self) -> ShVerdict:
        self.saturate()
        witness = self.witness_individual()
        if witness is None and self.options.case_split and self._case_split():
            self.saturate()
            witness = self.witness_individual()
        return ShVerdict(witness is None, witness, self.store, self.trace)

    def _case_split(self) -> bool:
        """Try each disjunct of the least open disjunction at a related individual; returns whether all fail."""
        for a in sorted(self.ontology.connected_individuals()):
            nominal = self.terms.nominal(a)
            for o in sort_terms(self.store.successors_of_kind(nominal, ConceptKind.OR)):
                if o not in self.eligible_ors or any(self.has(nominal, d) for d in o.children):
                    continue
                logger.debug("splitting {} over {}", a, o)
                for d in o.children:
                    branch = ShEngine(self.ontology.with_axioms([CAA(a, d)]), self.options).decide()
                    if branch.consistent:
                        return False
                self.add(nominal, self.terms.bot, "split", (self._c(nominal, o),))
                return True
        return False


# ─── Entry points ──────────────────────────────────────────────────────────────
def saturate_sh(o: Ontology, options: ShEngineOptions | None = None) -> ShVerdict:
    """Saturate ``o`` and report categorical consistency."""
    return ShEngine(o, options).decide()


def is_concept_unsat_sh(o: Ontology, c: ConceptTerm, options: ShEngineOptions | None = None) -> bool:
    engine = ShEngine(o, options)
    query = engine.add_query(c)
    engine.decide()
    return engine.is_bottom(query)


def derive_check_sh(
    o: Ontology,
    source: ConceptTerm,
    target: ConceptTerm,
    options: ShEngineOptions | None = None,
) -> bool:
    """Check whether ``source → target`` is in the saturated category."""
    engine = ShEngine(o, options)
    lhs, rhs = engine.add_query(source), engine.add_query(target)
    engine.decide()
    return engine.has(lhs, rhs)
