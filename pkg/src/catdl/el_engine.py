# ♥♥─── Catdl EL→ Engine ───────────────────────────────────
"""Polynomial saturation with the weakened constructors.

Disjunction, negation and universal restriction are read in their weakened form: no distribution, and the
interaction of ∃ with ∀ only registers the conjunction of the two fillers and tests it against ⊥.
"""

from __future__ import annotations

from functools import partial
from dataclasses import dataclass
from collections import defaultdict

from .terms import RoleTerm, ConceptKind, ConceptTerm, sort_terms
from .parser import token_count
from .ontology import Ontology, ensure_nnf
from .saturation import Rule, Application, SaturationEngine
from .data_models import Arrow, SaturationTrace, ElEngineOptions
from .category_store import CONCEPT, CategoryStore


def object_bound(n: int) -> int:
    """Largest object count a run over an ontology of ``n`` tokens can reach."""
    return 4 * n**4 + 8 * n**6


@dataclass
class ElVerdict:
    """Outcome of an EL→ saturation run."""

    consistent: bool
    witness: str | None
    store: CategoryStore
    trace: SaturationTrace
    object_count: int
    size: int

    @property
    def inconsistent(self) -> bool:
        return not self.consistent

    @property
    def bound(self) -> int:
        return object_bound(self.size)


# ─── Engine ────────────────────────────────────────────────────────────────────
class ElEngine(SaturationEngine):
    """Saturates an NNF ontology with the EL→ rule set."""

    prefix = "EL"

    def __init__(self, o: Ontology, options: ElEngineOptions | None = None) -> None:
        self.options = options or ElEngineOptions()
        super().__init__(o, schedule_seed=self.options.schedule_seed)
        # measured on the ontology as given, before any anonymous individual is added
        self.size = max(1, token_count(o))
        # conjunction object -> the objects that fall to ⊥ with it, the rule tag and its premises
        self.watch: defaultdict[ConceptTerm, list[tuple[ConceptTerm, str, tuple[Arrow, ...]]]] = defaultdict(list)
        self.checked: set[tuple[ConceptTerm, ConceptTerm, ConceptTerm, RoleTerm | None]] = set()

    @classmethod
    def prepare(cls, o: Ontology) -> Ontology:
        return ensure_nnf(o).with_anonymous_individual()

    def add_query(self, concept: ConceptTerm) -> ConceptTerm:
        return super().add_query(self.terms.nnf(concept))

    def arrow_rules(self, x: ConceptTerm, y: ConceptTerm) -> list[Rule]:
        rules = super().arrow_rules(x, y)
        if y is self.terms.bot and x in self.watch:
            rules.append(partial(self._watched_bottom, x))
        return rules

    def _watched_bottom(self, conjunction: ConceptTerm) -> None:
        """C ⊓ D → ⊥ ⟹ X → ⊥ for every X that registered C ⊓ D."""
        for x, tag, premises in list(self.watch[conjunction]):
            self.add(x, self.terms.bot, tag, (*premises, self._c(conjunction, self.terms.bot)))

    # ─── Rounds of object-creating rules ───────────────────────────────────────
    def boundary(self) -> bool:
        return self.apply(self.forall_exists_applications())

    def forall_exists_applications(self) -> list[Application]:
        """Register C ⊓ D for X → ∃P.C, X → ∀R.D, P → R, and C ⊓ ∀S.D through a transitive S."""
        terms = self.terms
        found: list[Application] = []
        for x in self.store.objects(CONCEPT):
            assert isinstance(x, ConceptTerm)
            if self.is_bottom(x):
                continue
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
                    if (x, e, f, None) not in self.checked:
                        self.checked.add((x, e, f, None))
                        conjunction = terms.and_([e.filler, f.filler])
                        app = Application("ex_allbar", premises, objects=(conjunction,), watch=(conjunction, x))
                        found.append(app)
                    for s in self.transitive_between(e.role, f.role):
                        if (x, e, f, s) in self.checked:
                            continue
                        self.checked.add((x, e, f, s))
                        inner = terms.forall(s, f.filler)
                        conjunction = terms.and_([e.filler, inner])
                        steps = (*premises, self._r(e.role, s), self._r(s, f.role))
                        found.append(
                            Application("ex_circ_allbar", steps, objects=(inner, conjunction), watch=(conjunction, x)),
                        )
        return found + self.individual_applications()

    def on_applied(self, app: Application) -> bool:
        if app.watch is None:
            return False
        conjunction, x = app.watch
        tag = "ex_circ_all" if app.tag == "ex_circ_allbar" else "ex_all"
        self.watch[conjunction].append((x, tag, app.premises))
        if self.is_bottom(conjunction):
            self.add(x, self.terms.bot, tag, (*app.premises, self._c(conjunction, self.terms.bot)))
        return True

    # ─── Verdict ───────────────────────────────────────────────────────────────
    def decide(self) -> ElVerdict:
        self.saturate()
        witness = next(
            (a for a in sorted(self.ontology.individuals) if self.is_bottom(self.terms.nominal(a))),
            None,
        )
        return ElVerdict(witness is None, witness, self.store, self.trace, self.store.object_count, self.size)


# ─── Entry points ──────────────────────────────────────────────────────────────
def saturate_el(o: Ontology, options: ElEngineOptions | None = None) -> ElVerdict:
    """Saturate ``o`` under the EL→ rules and report categorical consistency."""
    return ElEngine(o, options).decide()


def entails_el(o: Ontology, c: ConceptTerm, d: ConceptTerm, options: ElEngineOptions | None = None) -> bool:
    """Check ``c → d`` in the saturated category."""
    engine = ElEngine(o, options)
    lhs, rhs = engine.add_query(c), engine.add_query(d)
    engine.decide()
    return engine.has(lhs, rhs)


def is_concept_unsat_el(o: Ontology, c: ConceptTerm, options: ElEngineOptions | None = None) -> bool:
    engine = ElEngine(o, options)
    query = engine.add_query(c)
    engine.decide()
    return engine.is_bottom(query)
