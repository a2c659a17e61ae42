# ♥♥─── Catdl Category Store ───────────────────────────────
"""Concept and role categories with eagerly closed arrow relations.

Arrows are kept in per-object successor and predecessor sets and closed under composition on every insertion.
An object with an arrow into the initial object implicitly has an arrow to every object; those arrows are not
stored, and composition never passes through the initial object.
"""

from __future__ import annotations

import random
from typing import NamedTuple
from collections import defaultdict
from collections.abc import Iterator, Iterable

from loguru import logger

from .terms import Side, RoleKind, RoleTerm, ConceptKind, ConceptTerm, TermFactory, sort_terms
from .errors import BudgetExceededError, UnregisteredObjectError
from .data_models import Arrow, CategorySide, SaturationTrace


type Term = ConceptTerm | RoleTerm

CONCEPT = CategorySide.CONCEPT
ROLE = CategorySide.ROLE


class NewObject(NamedTuple):
    """Worklist event for a freshly registered object."""

    side: CategorySide
    term: Term


type Event = Arrow | NewObject


# ─── Store ─────────────────────────────────────────────────────────────────────
class CategoryStore:
    """Handles objects, closed Hom relations, the projection functors and the event worklist."""

    def __init__(
        self,
        terms: TermFactory,
        *,
        prefix: str = "R",
        budget_steps: int | None = None,
        trace: SaturationTrace | None = None,
        rng: random.Random | None = None,
    ) -> None:
        self.terms = terms
        self.prefix = prefix
        self.budget_steps = budget_steps
        self.trace = trace or SaturationTrace()
        self.rng = rng
        self.fired = 0
        self.worklist: list[Event] = []

        self._objects: dict[CategorySide, dict[Term, None]] = {CONCEPT: {}, ROLE: {}}
        self._succ: dict[CategorySide, dict[Term, set[Term]]] = {CONCEPT: {}, ROLE: {}}
        self._pred: dict[CategorySide, dict[Term, set[Term]]] = {CONCEPT: {}, ROLE: {}}
        self._bottom: dict[CategorySide, Term] = {CONCEPT: terms.bot, ROLE: terms.role_bot}
        self._top: dict[CategorySide, Term] = {CONCEPT: terms.top, ROLE: terms.role_top}

        # shape indexes over the concept side
        self._succ_kind: dict[ConceptTerm, dict[ConceptKind, set[ConceptTerm]]] = {}
        self.parents: defaultdict[ConceptTerm, set[ConceptTerm]] = defaultdict(set)
        self.exists_by_filler: defaultdict[ConceptTerm, set[ConceptTerm]] = defaultdict(set)
        self.exists_by_role: defaultdict[RoleTerm, set[ConceptTerm]] = defaultdict(set)
        self.forall_by_filler: defaultdict[ConceptTerm, set[ConceptTerm]] = defaultdict(set)
        self.forall_by_role: defaultdict[RoleTerm, set[ConceptTerm]] = defaultdict(set)
        self.pairs_by_individual: defaultdict[str, set[RoleTerm]] = defaultdict(set)

        self._bootstrap(CONCEPT)
        self._bootstrap(ROLE)
        self._seed_special_projections()

    def tag(self, name: str) -> str:
        return f"{self.prefix}_{name}"

    # ─── Bootstrap ─────────────────────────────────────────────────────────────
    def _bootstrap(self, side: CategorySide) -> None:
        """Register the terminal and initial objects of one category."""
        top, bot = self._top[side], self._bottom[side]
        for term in (top, bot):
            self._objects[side][term] = None
            self._succ[side][term] = {term}
            self._pred[side][term] = {term}
            if side is CONCEPT:
                assert isinstance(term, ConceptTerm)
                self._succ_kind[term] = defaultdict(set)
                self._succ_kind[term][term.kind].add(term)
        self._materialize(side, bot, top)
        self.trace.record(
            self.tag("it"),
            (),
            (Arrow(side, top, top), Arrow(side, bot, bot), Arrow(side, bot, top)),
        )
        for term in (top, bot):
            self.worklist.append(NewObject(side, term))
        self.worklist.append(Arrow(side, top, top))

    def _seed_special_projections(self) -> None:
        """Both projections of the terminal role are terminal, both projections of the initial role are initial."""
        pending: list[tuple[CategorySide, Term, Term, str, tuple[Arrow, ...]]] = []
        for role, target in ((self.terms.role_top, self.terms.top), (self.terms.role_bot, self.terms.bot)):
            for side in Side:
                projection = self.terms.proj(side, role)
                self.register_concept(projection)
                pending.append((CONCEPT, projection, target, self.tag("sub"), ()))
                pending.append((CONCEPT, target, projection, self.tag("sub"), ()))
        self._insert_all(pending)

    # ─── Queries ───────────────────────────────────────────────────────────────
    def is_registered(self, side: CategorySide, term: Term) -> bool:
        return term in self._objects[side]

    def objects(self, side: CategorySide) -> list[Term]:
        """Registered objects in term order."""
        return sort_terms(self._objects[side])  # type: ignore[type-var]

    def concept_objects(self) -> Iterable[ConceptTerm]:
        return self._objects[CONCEPT]  # type: ignore[return-value]

    def is_bottom(self, side: CategorySide, term: Term) -> bool:
        """Check whether ``term`` has an arrow into the initial object."""
        succ = self._succ[side].get(term)
        return succ is not None and self._bottom[side] in succ

    def has_arrow(self, side: CategorySide, x: Term, y: Term) -> bool:
        """True iff ``x → y`` holds; unregistered terms answer False."""
        succ = self._succ[side].get(x)
        if succ is None or y not in self._objects[side]:
            return False
        return y in succ or self._bottom[side] in succ

    def successors(self, side: CategorySide, x: Term) -> set[Term]:
        """Stored successors; for an object with an arrow into the initial object this is not every target."""
        return self._succ[side].get(x, set())

    def predecessors(self, side: CategorySide, y: Term) -> set[Term]:
        return self._pred[side].get(y, set())

    def successors_of_kind(self, x: ConceptTerm, kind: ConceptKind) -> set[ConceptTerm]:
        return self._succ_kind.get(x, {}).get(kind, set())

    @property
    def object_count(self) -> int:
        return len(self._objects[CONCEPT]) + len(self._objects[ROLE])

    @property
    def arrow_count(self) -> int:
        return sum(len(s) for side in (CONCEPT, ROLE) for s in self._succ[side].values())

    def arrows(self, side: CategorySide) -> Iterator[Arrow]:
        """Every arrow in a canonical form and order; an object below the initial one yields only that arrow."""
        bottom = self._bottom[side]
        for x in self.objects(side):
            succ = self._succ[side][x]
            if x is not bottom and bottom in succ:
                yield Arrow(side, x, bottom)
                continue
            for y in sort_terms(succ):  # type: ignore[type-var]
                yield Arrow(side, x, y)

    # ─── Registration ──────────────────────────────────────────────────────────
    def register_concept(self, t: ConceptTerm) -> bool:
        """Register ``t`` and its immediate parts; returns whether anything new was added."""
        if t in self._objects[CONCEPT]:
            return False
        for child in t.children:
            self.register_concept(child)
        if t.role is not None and self.register_role(t.role) and t in self._objects[CONCEPT]:
            return True
        self._add_concept(t)
        self._insert_all([(CONCEPT, t, self.terms.top, self.tag("it"), ())])
        return True

    def register_role(self, r: RoleTerm) -> bool:
        """Register ``r`` with its identity, terminal and initial arrows and both projections."""
        if r in self._objects[ROLE]:
            return False
        self._spend()
        top, bot = self.terms.role_top, self.terms.role_bot
        self._objects[ROLE][r] = None
        self._succ[ROLE][r] = {r}
        self._pred[ROLE][r] = {r}
        self._materialize(ROLE, bot, r)
        if r.kind is RoleKind.PAIR:
            assert r.pair is not None
            self.pairs_by_individual[r.pair[0]].add(r)
        self.trace.record(self.tag("it"), (), (Arrow(ROLE, r, r), Arrow(ROLE, r, top), Arrow(ROLE, bot, r)))
        self.worklist.append(NewObject(ROLE, r))
        self.worklist.append(Arrow(ROLE, r, r))
        # both projections exist before any arrow is closed: once ⊤ → ⊥ holds, the first terminal
        # arrow of a projection already sends its sibling to ⊥
        left, right = self.terms.proj(Side.LEFT, r), self.terms.proj(Side.RIGHT, r)
        self._add_concept(left)
        self._add_concept(right)
        identities = (Arrow(CONCEPT, left, left), Arrow(CONCEPT, right, right))
        self.trace.record(self.tag("r"), (Arrow(ROLE, r, r),), identities)
        self._insert_all(
            [
                (CONCEPT, left, self.terms.top, self.tag("it"), ()),
                (CONCEPT, right, self.terms.top, self.tag("it"), ()),
                (ROLE, r, top, self.tag("it"), ()),
            ]
        )
        return True

    def _add_concept(self, t: ConceptTerm) -> None:
        """Add ``t`` with its identity and initial arrows; the terminal arrow is left to the caller."""
        self._spend()
        top, bot = self.terms.top, self.terms.bot
        self._objects[CONCEPT][t] = None
        self._succ[CONCEPT][t] = {t}
        self._pred[CONCEPT][t] = {t}
        self._succ_kind[t] = defaultdict(set)
        self._succ_kind[t][t.kind].add(t)
        self._materialize(CONCEPT, bot, t)
        self._index(t)
        self.trace.record(self.tag("it"), (), (Arrow(CONCEPT, t, t), Arrow(CONCEPT, t, top), Arrow(CONCEPT, bot, t)))
        self.worklist.append(NewObject(CONCEPT, t))
        self.worklist.append(Arrow(CONCEPT, t, t))

    def _index(self, t: ConceptTerm) -> None:
        match t.kind:
            case ConceptKind.AND | ConceptKind.OR:
                for child in t.children:
                    self.parents[child].add(t)
            case ConceptKind.EXISTS:
                assert t.role is not None
                self.exists_by_filler[t.filler].add(t)
                self.exists_by_role[t.role].add(t)
            case ConceptKind.FORALL:
                assert t.role is not None
                self.forall_by_filler[t.filler].add(t)
                self.forall_by_role[t.role].add(t)
            case _:
                pass

    # ─── Arrows ────────────────────────────────────────────────────────────────
    def add_arrow(
        self,
        side: CategorySide,
        x: Term,
        y: Term,
        tag: str,
        premises: tuple[Arrow, ...] = (),
    ) -> list[Arrow]:
        """Insert ``x → y`` and restore closure; returns the newly stored arrows (the change report)."""
        for term in (x, y):
            if term not in self._objects[side]:
                msg = f"{side.value} object {term} is not registered"
                raise UnregisteredObjectError(msg)
        return self._insert_all([(side, x, y, tag, premises)])

    def _insert_all(self, pending: list[tuple[CategorySide, Term, Term, str, tuple[Arrow, ...]]]) -> list[Arrow]:
        added: list[Arrow] = []
        while pending:
            side, x, y, tag, premises = pending.pop()
            fresh = self._insert(side, x, y, tag, premises)
            added += fresh
            for arrow in fresh:
                pending += self._structural(arrow)
        return added

    def _insert(
        self,
        side: CategorySide,
        x: Term,
        y: Term,
        tag: str,
        premises: tuple[Arrow, ...],
    ) -> list[Arrow]:
        if self.has_arrow(side, x, y):
            return []
        self._spend()
        bottom = self._bottom[side]
        sources = [w for w in self._pred[side][x] if w is not bottom]
        targets = [bottom] if bottom in self._succ[side][y] else list(self._succ[side][y])
        primary = Arrow(side, x, y)
        # recorded first so every composite below finds it in the trace; when y lies below the initial
        # object it is implied rather than stored
        self.trace.record(tag, premises, (primary,))
        fresh: list[Arrow] = []
        for w in sources:
            for z in targets:
                if self.has_arrow(side, w, z):
                    continue
                self._materialize(side, w, z)
                arrow = Arrow(side, w, z)
                fresh.append(arrow)
                self.worklist.append(arrow)
                if arrow != primary:
                    chain = (Arrow(side, w, x), primary, Arrow(side, y, z))
                    used = tuple(a for a in chain if a.source is not a.target)
                    self.trace.record(self.tag("tr"), used, (arrow,))
        return fresh

    def _materialize(self, side: CategorySide, x: Term, y: Term) -> None:
        self._succ[side][x].add(y)
        self._pred[side][y].add(x)
        if side is CONCEPT:
            assert isinstance(x, ConceptTerm)
            assert isinstance(y, ConceptTerm)
            self._succ_kind[x][y.kind].add(y)

    def _structural(self, arrow: Arrow) -> list[tuple[CategorySide, Term, Term, str, tuple[Arrow, ...]]]:
        """Functor images of role arrows, and the functor rule for projections into the initial object."""
        consequences: list[tuple[CategorySide, Term, Term, str, tuple[Arrow, ...]]] = []
        x, y = arrow.source, arrow.target
        if arrow.side is ROLE:
            assert isinstance(x, RoleTerm)
            assert isinstance(y, RoleTerm)
            if y is self.terms.role_bot:
                for side in (Side.LEFT, Side.RIGHT):
                    consequences.append((CONCEPT, self.terms.proj(side, x), self.terms.bot, self.tag("f"), (arrow,)))
            else:
                for side in (Side.LEFT, Side.RIGHT):
                    image = (CONCEPT, self.terms.proj(side, x), self.terms.proj(side, y), self.tag("r"), (arrow,))
                    consequences.append(image)
        elif y is self.terms.bot and isinstance(x, ConceptTerm) and x.kind is ConceptKind.PROJ:
            assert x.role is not None
            other = Side.RIGHT if x.side is Side.LEFT else Side.LEFT
            consequences.append((CONCEPT, self.terms.proj(other, x.role), self.terms.bot, self.tag("f"), (arrow,)))
            consequences.append((ROLE, x.role, self.terms.role_bot, self.tag("f"), (arrow,)))
        return consequences

    # ─── Worklist ──────────────────────────────────────────────────────────────
    def pop_event(self) -> Event | None:
        """Next pending event; a seeded store pops in a random order."""
        if not self.worklist:
            return None
        if self.rng is not None:
            index = self.rng.randrange(len(self.worklist))
            self.worklist[index], self.worklist[-1] = self.worklist[-1], self.worklist[index]
        return self.worklist.pop()

    def _spend(self) -> None:
        self.fired += 1
        if self.budget_steps is not None and self.fired > self.budget_steps:
            msg = f"step budget of {self.budget_steps} exhausted"
            logger.debug("{} with {} objects and {} arrows", msg, self.object_count, self.arrow_count)
            raise BudgetExceededError(msg, objects=self.object_count, arrows=self.arrow_count)
