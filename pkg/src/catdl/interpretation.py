# ♥♥─── Catdl Interpretations ──────────────────────────────
"""Finite interpretations, their set semantics, and the completion graphs both tableaux build them from."""

from __future__ import annotations

from typing import Self, ClassVar
from dataclasses import field, dataclass
from collections.abc import Mapping, Iterable, Iterator

from .terms import Side, RoleKind, RoleTerm, ConceptKind, ConceptTerm
from .errors import MalformedTermError
from .records import ModelRecord
from .ontology import CAA, GCI, ITR, RAA, RI, Axiom, Ontology, RoleClosure


type Pairs = frozenset[tuple[int, int]]


def transitive_closure(pairs: Iterable[tuple[int, int]]) -> Pairs:
    """Smallest transitive relation containing ``pairs``."""
    closure = set(pairs)
    while True:
        succ: dict[int, set[int]] = {}
        for x, y in closure:
            succ.setdefault(x, set()).add(y)
        fresh = {(x, z) for x, y in closure for z in succ.get(y, ()) if (x, z) not in closure}
        if not fresh:
            return frozenset(closure)
        closure |= fresh


# ─── Interpretation ────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class TableauModel:
    """A finite interpretation ⟨Δ, ·⟩ over integer domain elements."""

    domain: tuple[int, ...]
    concept_extension: Mapping[str, frozenset[int]]
    role_extension: Mapping[str, Pairs]
    individual_assignment: Mapping[str, int]
    _cache: dict[ConceptTerm, frozenset[int]] = field(default_factory=dict, compare=False, repr=False)

    def role_pairs(self, role: RoleTerm) -> Pairs:
        match role.kind:
            case RoleKind.NAMED:
                return self.role_extension.get(role.name, frozenset())
            case RoleKind.TOP:
                return frozenset((x, y) for x in self.domain for y in self.domain)
            case RoleKind.BOT:
                return frozenset()
            case RoleKind.PAIR:
                assert role.pair is not None
                a, b = role.pair
                if a not in self.individual_assignment or b not in self.individual_assignment:
                    return frozenset()
                return frozenset({(self.individual_assignment[a], self.individual_assignment[b])})
            case _:
                msg = f"witness role {role} has no set semantics"
                raise MalformedTermError(msg)

    def extension(self, concept: ConceptTerm) -> frozenset[int]:
        """Set of domain elements in ``concept``."""
        found = self._cache.get(concept)
        if found is None:
            found = self._evaluate(concept)
            self._cache[concept] = found
        return found

    def _evaluate(self, concept: ConceptTerm) -> frozenset[int]:
        everything = frozenset(self.domain)
        match concept.kind:
            case ConceptKind.TOP:
                return everything
            case ConceptKind.BOT:
                return frozenset()
            case ConceptKind.ATOM:
                return self.concept_extension.get(concept.name, frozenset())
            case ConceptKind.NOMINAL:
                element = self.individual_assignment.get(concept.name)
                return frozenset() if element is None else frozenset({element})
            case ConceptKind.NOT:
                return everything - self.extension(concept.operand)
            case ConceptKind.AND:
                return frozenset.intersection(*(self.extension(c) for c in concept.children))
            case ConceptKind.OR:
                return frozenset.union(*(self.extension(c) for c in concept.children))
            case ConceptKind.EXISTS:
                assert concept.role is not None
                filler = self.extension(concept.filler)
                return frozenset(x for x, y in self.role_pairs(concept.role) if y in filler)
            case ConceptKind.FORALL:
                assert concept.role is not None
                filler = self.extension(concept.filler)
                escaping = {x for x, y in self.role_pairs(concept.role) if y not in filler}
                return everything - escaping
            case _:
                assert concept.role is not None
                pairs = self.role_pairs(concept.role)
                if concept.side is Side.LEFT:
                    return frozenset(x for x, _ in pairs)
                return frozenset(y for _, y in pairs)

    def satisfies(self, axiom: Axiom) -> bool:
        """Check one axiom under the set semantics."""
        match axiom:
            case GCI(lhs, rhs):
                return self.extension(lhs) <= self.extension(rhs)
            case RI(sub, sup):
                return self.role_pairs(sub) <= self.role_pairs(sup)
            case ITR(role):
                pairs = self.role_pairs(role)
                return transitive_closure(pairs) == pairs
            case CAA(individual, concept):
                return self.individual_assignment.get(individual) in self.extension(concept)
            case RAA(a, b, role):
                pair = (self.individual_assignment.get(a), self.individual_assignment.get(b))
                return pair in self.role_pairs(role)
            case _:
                return False

    def violations(self, o: Ontology) -> list[Axiom]:
        return [axiom for axiom in o.axioms if not self.satisfies(axiom)]

    def to_record(self) -> ModelRecord:
        return ModelRecord(
            domain=list(self.domain),
            concepts={name: sorted(ext) for name, ext in sorted(self.concept_extension.items())},
            roles={name: sorted(ext) for name, ext in sorted(self.role_extension.items())},
            individuals=dict(sorted(self.individual_assignment.items())),
        )


def close_roles(base: Mapping[RoleTerm, Iterable[tuple[int, int]]], closure: RoleClosure) -> dict[str, Pairs]:
    """Least role extensions containing ``base`` that respect the role hierarchy and transitivity."""
    ext: dict[RoleTerm, set[tuple[int, int]]] = {role: set(pairs) for role, pairs in base.items()}
    for role in closure.sub:
        ext.setdefault(role, set())
    changed = True
    while changed:
        changed = False
        for role in list(ext):
            for sup in closure.supers(role):
                target = ext.setdefault(sup, set())
                if not ext[role] <= target:
                    target |= ext[role]
                    changed = True
        for role in closure.transitive_roles:
            closed = transitive_closure(ext.get(role, ()))
            if len(closed) != len(ext.get(role, ())):
                ext[role] = set(closed)
                changed = True
    return {role.name: frozenset(pairs) for role, pairs in ext.items() if role.is_named}


# ─── Completion graphs ─────────────────────────────────────────────────────────
@dataclass
class CompletionGraph:
    """Nodes with concept labels, labelled edges and the tree of generated successors."""

    equality_blocking: ClassVar[bool] = False

    labels: list[set[ConceptTerm]] = field(default_factory=list)
    parent: list[int | None] = field(default_factory=list)
    out: list[list[int]] = field(default_factory=list)
    edges: dict[tuple[int, int], set[RoleTerm]] = field(default_factory=dict)
    individual_map: dict[str, int] = field(default_factory=dict)
    closure: RoleClosure = field(default_factory=lambda: RoleClosure({}, frozenset()))

    @property
    def nodes(self) -> range:
        return range(len(self.labels))

    def add_node(self, label: Iterable[ConceptTerm], parent: int | None = None) -> int:
        node = len(self.labels)
        self.labels.append(set(label))
        self.parent.append(parent)
        self.out.append([])
        return node

    def add_edge(self, x: int, y: int, role: RoleTerm) -> bool:
        roles = self.edges.get((x, y))
        if roles is None:
            roles = self.edges[x, y] = set()
            self.out[x].append(y)
        if role in roles:
            return False
        roles.add(role)
        return True

    def neighbours(self, x: int) -> Iterator[tuple[int, set[RoleTerm]]]:
        for y in self.out[x]:
            yield y, self.edges[x, y]

    def ancestors(self, x: int) -> Iterator[int]:
        node = self.parent[x]
        while node is not None:
            yield node
            node = self.parent[node]

    def root_individual(self, x: int) -> str | None:
        """Individual whose node is the root of the tree holding ``x``."""
        root = x
        while (up := self.parent[root]) is not None:
            root = up
        return next((name for name, node in sorted(self.individual_map.items()) if node == root), None)

    def blocker(self, x: int) -> int | None:
        """Nearest ancestor whose label contains (or, with equality blocking, equals) the label of ``x``."""
        label = self.labels[x]
        for ancestor in self.ancestors(x):
            other = self.labels[ancestor]
            if label == other or (not self.equality_blocking and label <= other):
                return ancestor
        return None

    def is_active(self, x: int) -> bool:
        """Neither ``x`` nor any of its ancestors is blocked."""
        return self.blocker(x) is None and all(self.blocker(a) is None for a in self.ancestors(x))

    def copy(self) -> Self:
        return type(self)(
            labels=[set(label) for label in self.labels],
            parent=list(self.parent),
            out=[list(ys) for ys in self.out],
            edges={key: set(roles) for key, roles in self.edges.items()},
            individual_map=dict(self.individual_map),
            closure=self.closure,
        )

    def to_model(self) -> TableauModel:
        """Read the interpretation off the graph: blocked nodes are replaced by their blockers, roles are closed."""
        blocked = {x: b for x in self.nodes if (b := self.blocker(x)) is not None}
        domain = [x for x in self.nodes if x not in blocked and not any(a in blocked for a in self.ancestors(x))]
        kept = set(domain)
        base: dict[RoleTerm, set[tuple[int, int]]] = {}
        for (x, y), roles in self.edges.items():
            if x not in kept:
                continue
            target = y if y in kept else blocked.get(y)
            if target is None:
                continue
            for role in roles:
                base.setdefault(role, set()).add((x, target))
        atoms: dict[str, set[int]] = {}
        for x in domain:
            for concept in self.labels[x]:
                if concept.kind is ConceptKind.ATOM:
                    atoms.setdefault(concept.name, set()).add(x)
        return TableauModel(
            domain=tuple(domain),
            concept_extension={name: frozenset(ext) for name, ext in atoms.items()},
            role_extension=close_roles(base, self.closure),
            individual_assignment=dict(self.individual_map),
        )
