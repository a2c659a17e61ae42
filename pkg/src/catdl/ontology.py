# ♥♥─── Catdl Ontology Model ───────────────────────────────
from __future__ import annotations

from collections import Counter, deque
from dataclasses import field, dataclass
from collections.abc import Iterable

from .terms import (
    RoleTerm,
    ConceptKind,
    ConceptTerm,
    TermFactory,
    subterms,
    role_names as roles_of,
    concept_names as atoms_of,
)


ANONYMOUS_INDIVIDUAL = "_w"

EL_BOT_CIRC_KINDS = frozenset({
    ConceptKind.TOP,
    ConceptKind.BOT,
    ConceptKind.ATOM,
    ConceptKind.AND,
    ConceptKind.EXISTS,
})


# ─── Axioms ────────────────────────────────────────────────────────────────────
@dataclass(frozen=True, slots=True)
class GCI:
    """General concept inclusion ``lhs ⊑ rhs``."""

    lhs: ConceptTerm
    rhs: ConceptTerm


@dataclass(frozen=True, slots=True)
class RI:
    """Role inclusion ``sub ⊑ sup``."""

    sub: RoleTerm
    sup: RoleTerm


@dataclass(frozen=True, slots=True)
class ITR:
    """Transitivity of ``role``, i.e. ``role ∘ role ⊑ role``."""

    role: RoleTerm


@dataclass(frozen=True, slots=True)
class CAA:
    """Concept assertion ``{individual} ⊑ concept``."""

    individual: str
    concept: ConceptTerm


@dataclass(frozen=True, slots=True)
class RAA:
    """Role assertion ``{(a, b)} ⊑ role``."""

    a: str
    b: str
    role: RoleTerm


type Axiom = GCI | RI | ITR | CAA | RAA


# ─── Ontology ──────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class Ontology:
    """A finite, duplicate-free axiom sequence with its signature."""

    terms: TermFactory = field(compare=False, repr=False)
    axioms: tuple[Axiom, ...] = ()
    concept_names: frozenset[str] = frozenset()
    role_names: frozenset[str] = frozenset()
    individuals: frozenset[str] = frozenset()
    sh_normalized: bool = field(default=False, compare=False)

    @classmethod
    def build(
        cls,
        terms: TermFactory,
        axioms: Iterable[Axiom],
        concept_names: Iterable[str] = (),
        role_names: Iterable[str] = (),
        individuals: Iterable[str] = (),
        *,
        sh_normalized: bool = False,
    ) -> Ontology:
        """Deduplicate axioms (first occurrence wins) and close the signature over them."""
        unique = tuple(dict.fromkeys(axioms))
        concepts, roles, names = set(concept_names), set(role_names), set(individuals)
        for axiom in unique:
            match axiom:
                case GCI(lhs, rhs):
                    concepts |= atoms_of(lhs) | atoms_of(rhs)
                    roles |= roles_of(lhs) | roles_of(rhs)
                case RI(sub, sup):
                    roles |= {sub.name, sup.name}
                case ITR(role):
                    roles.add(role.name)
                case CAA(individual, concept):
                    names.add(individual)
                    concepts |= atoms_of(concept)
                    roles |= roles_of(concept)
                case RAA(a, b, role):
                    names |= {a, b}
                    roles.add(role.name)
        return cls(terms, unique, frozenset(concepts), frozenset(roles), frozenset(names), sh_normalized)

    def with_axioms(self, extra: Iterable[Axiom]) -> Ontology:
        return Ontology.build(
            self.terms,
            (*self.axioms, *extra),
            self.concept_names,
            self.role_names,
            self.individuals,
            sh_normalized=self.sh_normalized,
        )

    def with_anonymous_individual(self) -> Ontology:
        """Add ``_w : Top`` when the ontology names no individual."""
        if self.individuals:
            return self
        return self.with_axioms([CAA(ANONYMOUS_INDIVIDUAL, self.terms.top)])

    @property
    def gcis(self) -> list[GCI]:
        return [a for a in self.axioms if isinstance(a, GCI)]

    @property
    def caas(self) -> list[CAA]:
        return [a for a in self.axioms if isinstance(a, CAA)]

    @property
    def raas(self) -> list[RAA]:
        return [a for a in self.axioms if isinstance(a, RAA)]

    def counts_by_kind(self) -> dict[str, int]:
        counts = Counter(type(a).__name__ for a in self.axioms)
        return {kind: counts.get(kind, 0) for kind in ("GCI", "RI", "ITR", "CAA", "RAA")}

    def concepts(self) -> list[ConceptTerm]:
        """Every concept expression occurring in an axiom."""
        found: list[ConceptTerm] = []
        for axiom in self.axioms:
            match axiom:
                case GCI(lhs, rhs):
                    found += [lhs, rhs]
                case CAA(_, concept):
                    found.append(concept)
        return found

    def connected_individuals(self) -> set[str]:
        """Individuals that take part in some role assertion."""
        return {name for raa in self.raas for name in (raa.a, raa.b)}


# ─── Normal forms ──────────────────────────────────────────────────────────────
def normalize_for_sh(o: Ontology) -> Ontology:
    """Rewrite every GCI ``C ⊑ D`` into ``⊤ ⊑ NNF(¬C ⊔ D)`` and put assertions into NNF."""
    if o.sh_normalized:
        return o
    terms = o.terms
    axioms: list[Axiom] = []
    for axiom in o.axioms:
        match axiom:
            case GCI(lhs, rhs):
                axioms.append(GCI(terms.top, terms.or_([terms.negate(lhs), terms.nnf(rhs)])))
            case CAA(individual, concept):
                axioms.append(CAA(individual, terms.nnf(concept)))
            case _:
                axioms.append(axiom)
    return Ontology.build(terms, axioms, o.concept_names, o.role_names, o.individuals, sh_normalized=True)


def ensure_nnf(o: Ontology) -> Ontology:
    """Put every concept into NNF while keeping the shape of each GCI."""
    terms = o.terms
    axioms: list[Axiom] = []
    for axiom in o.axioms:
        match axiom:
            case GCI(lhs, rhs):
                axioms.append(GCI(terms.nnf(lhs), terms.nnf(rhs)))
            case CAA(individual, concept):
                axioms.append(CAA(individual, terms.nnf(concept)))
            case _:
                axioms.append(axiom)
    return Ontology.build(terms, axioms, o.concept_names, o.role_names, o.individuals, sh_normalized=o.sh_normalized)


def first_non_el_term(o: Ontology) -> ConceptTerm | None:
    """Return the first subterm outside ⊓/∃/⊤/⊥/atoms, or None for an EL⊥∘ ontology."""
    for concept in o.concepts():
        for sub in subterms(concept):
            if sub.kind not in EL_BOT_CIRC_KINDS:
                return sub
    return None


# ─── Role closure ──────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class RoleClosure:
    """Reflexive-transitive role hierarchy plus the transitivity-into facts ``S∘S ⊑* S'``."""

    sub: dict[RoleTerm, frozenset[RoleTerm]]
    trans_into: frozenset[tuple[RoleTerm, RoleTerm]]

    def subsumes(self, sub: RoleTerm, sup: RoleTerm) -> bool:
        """Check ``sub ⊑* sup``."""
        return sub is sup or sup in self.sub.get(sub, frozenset())

    def supers(self, role: RoleTerm) -> frozenset[RoleTerm]:
        return self.sub.get(role, frozenset({role}))

    def is_transitive(self, role: RoleTerm) -> bool:
        return (role, role) in self.trans_into

    @property
    def transitive_roles(self) -> list[RoleTerm]:
        return sorted({s for s, t in self.trans_into if s is t}, key=lambda r: r.key)


def compute_role_closure(o: Ontology) -> RoleClosure:
    """Close role inclusions and role assertions under reflexivity and transitivity."""
    terms = o.terms
    edges: dict[RoleTerm, set[RoleTerm]] = {terms.role(name): set() for name in o.role_names}
    itrs: list[RoleTerm] = []
    for axiom in o.axioms:
        match axiom:
            case RI(sub, sup):
                edges.setdefault(sub, set()).add(sup)
                edges.setdefault(sup, set())
            case RAA(a, b, role):
                edges.setdefault(terms.pair(a, b), set()).add(role)
                edges.setdefault(role, set())
            case ITR(role):
                itrs.append(role)
                edges.setdefault(role, set())

    sub: dict[RoleTerm, frozenset[RoleTerm]] = {}
    for start in edges:
        seen = {start}
        queue = deque([start])
        while queue:
            for nxt in edges[queue.popleft()]:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        sub[start] = frozenset(seen)

    # least fixpoint of "S∘S ⊑* R, R ⊑* S' gives S∘S ⊑* S'"
    trans_into = {(s, s) for s in itrs}
    changed = True
    while changed:
        changed = False
        for s, r in list(trans_into):
            for sup in sub.get(r, frozenset({r})):
                if (s, sup) not in trans_into:
                    trans_into.add((s, sup))
                    changed = True
    return RoleClosure(sub, frozenset(trans_into))


def existential_variants(terms: TermFactory, closure: RoleClosure, concept: ConceptTerm) -> list[ConceptTerm]:
    """∃S'.D for each ∃S.D inside ``concept`` and each transitive S' ⊑* S other than S."""
    found: dict[ConceptTerm, None] = {}
    for sub in subterms(concept):
        if sub.kind is not ConceptKind.EXISTS:
            continue
        assert sub.role is not None
        for s in closure.transitive_roles:
            if s is not sub.role and closure.subsumes(s, sub.role):
                found[terms.exists(s, sub.filler)] = None
    return list(found)
