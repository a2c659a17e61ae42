# ♥♥─── Catdl Terms ────────────────────────────────────────
"""Interned concept and role terms.

Every term is built by a :class:`TermFactory`, which hash-conses structurally identical terms into one object.
Equality and hashing are therefore by identity, and conjunctions and disjunctions are stored flattened,
duplicate-free and sorted by :func:`term_order`.
"""

from __future__ import annotations

from enum import Enum
from typing import Any, TypeAlias
from dataclasses import field, dataclass
from collections.abc import Iterable, Iterator

from .errors import MalformedTermError


SortKey: TypeAlias = tuple[Any, ...]


# ─── Kinds ─────────────────────────────────────────────────────────────────────
class ConceptKind(Enum):
    """Concept constructors, valued by their rank in the term order."""

    TOP = 0
    BOT = 1
    ATOM = 2
    NOT = 3
    NOMINAL = 4
    PROJ = 5
    AND = 6
    OR = 7
    EXISTS = 8
    FORALL = 9


class RoleKind(Enum):
    """Role constructors, valued by their rank in the term order."""

    TOP = 0
    BOT = 1
    NAMED = 2
    PAIR = 3
    WITNESS = 4


class Side(Enum):
    """Side of a role projection."""

    LEFT = "l"
    RIGHT = "r"


class RawOp(Enum):
    """Constructors of an uncanonicalized concept expression."""

    TOP = "Top"
    BOT = "Bot"
    ATOM = "atom"
    AND = "and"
    OR = "or"
    NOT = "not"
    SOME = "some"
    ONLY = "only"


# ─── Terms ─────────────────────────────────────────────────────────────────────
@dataclass(frozen=True, eq=False, slots=True)
class RoleTerm:
    """Interned role expression."""

    kind: RoleKind
    name: str = ""
    pair: tuple[str, str] | None = None
    source: ConceptTerm | None = None
    key: SortKey = field(default=(), repr=False)

    @property
    def is_named(self) -> bool:
        return self.kind is RoleKind.NAMED

    def __str__(self) -> str:
        match self.kind:
            case RoleKind.TOP:
                return "RTop"
            case RoleKind.BOT:
                return "RBot"
            case RoleKind.NAMED:
                return self.name
            case RoleKind.PAIR:
                assert self.pair is not None
                return f"{{({self.pair[0]},{self.pair[1]})}}"
            case _:
                return f"(witness {self.source})"


@dataclass(frozen=True, eq=False, slots=True)
class ConceptTerm:
    """Interned concept expression.

    ``children`` holds the operands of And/Or, the single operand of Not and the filler of Exists/Forall.
    ``name`` is the atom name or, for a nominal, the individual.
    """

    kind: ConceptKind
    name: str = ""
    children: tuple[ConceptTerm, ...] = ()
    role: RoleTerm | None = None
    side: Side | None = None
    key: SortKey = field(default=(), repr=False)

    @property
    def filler(self) -> ConceptTerm:
        """Filler of an existential or universal restriction."""
        return self.children[0]

    @property
    def operand(self) -> ConceptTerm:
        """Operand of a negation."""
        return self.children[0]

    @property
    def conjuncts(self) -> tuple[ConceptTerm, ...]:
        return self.children if self.kind is ConceptKind.AND else (self,)

    @property
    def is_literal(self) -> bool:
        """Atom or negated atom."""
        return self.kind is ConceptKind.ATOM or (
            self.kind is ConceptKind.NOT and self.operand.kind is ConceptKind.ATOM
        )

    @property
    def is_nnf(self) -> bool:
        """Check that negation is applied to atoms only."""
        return all(t.kind is not ConceptKind.NOT or t.operand.kind is ConceptKind.ATOM for t in subterms(self))

    def __str__(self) -> str:
        match self.kind:
            case ConceptKind.TOP:
                return "Top"
            case ConceptKind.BOT:
                return "Bot"
            case ConceptKind.ATOM:
                return self.name
            case ConceptKind.NOMINAL:
                return f"{{{self.name}}}"
            case ConceptKind.NOT:
                return f"(not {self.operand})"
            case ConceptKind.AND | ConceptKind.OR:
                return f"({self.kind.name.lower()} {' '.join(map(str, self.children))})"
            case ConceptKind.EXISTS:
                return f"(some {self.role} {self.filler})"
            case ConceptKind.FORALL:
                return f"(only {self.role} {self.filler})"
            case _:
                assert self.side is not None
                return f"(proj-{self.side.value} {self.role})"


@dataclass(frozen=True, slots=True)
class RawConcept:
    """Concept expression as written, before canonicalization."""

    op: RawOp
    name: str = ""
    role: str = ""
    args: tuple[RawConcept, ...] = ()


# ─── Order ─────────────────────────────────────────────────────────────────────
def term_order(a: ConceptTerm | RoleTerm, b: ConceptTerm | RoleTerm) -> int:
    """Compare two terms of the same sort; returns -1, 0 or 1."""
    if a is b:
        return 0
    return -1 if a.key < b.key else 1


def sort_terms[T: (ConceptTerm, RoleTerm)](terms: Iterable[T]) -> list[T]:
    return sorted(terms, key=lambda t: t.key)


def subterms(t: ConceptTerm) -> Iterator[ConceptTerm]:
    """Yield every concept subterm, children before parents; projections and witnesses are not entered."""
    for child in t.children:
        yield from subterms(child)
    yield t


def concept_names(t: ConceptTerm) -> set[str]:
    return {s.name for s in subterms(t) if s.kind is ConceptKind.ATOM}


def role_names(t: ConceptTerm) -> set[str]:
    return {
        s.role.name
        for s in subterms(t)
        if s.kind in {ConceptKind.EXISTS, ConceptKind.FORALL} and s.role is not None and s.role.is_named
    }


# ─── Interner ──────────────────────────────────────────────────────────────────
class TermFactory:
    """Builds and interns terms; one factory per reasoning session."""

    def __init__(self) -> None:
        self._concepts: dict[tuple[Any, ...], ConceptTerm] = {}
        self._roles: dict[tuple[Any, ...], RoleTerm] = {}
        self._nnf: dict[ConceptTerm, ConceptTerm] = {}
        self.top = self._intern_concept(ConceptKind.TOP)
        self.bot = self._intern_concept(ConceptKind.BOT)
        self.role_top = self._intern_role(RoleKind.TOP)
        self.role_bot = self._intern_role(RoleKind.BOT)

    @property
    def concept_count(self) -> int:
        return len(self._concepts)

    @property
    def role_count(self) -> int:
        return len(self._roles)

    # ─── Roles ─────────────────────────────────────────────────────────────────
    def _intern_role(
        self,
        kind: RoleKind,
        name: str = "",
        pair: tuple[str, str] | None = None,
        source: ConceptTerm | None = None,
    ) -> RoleTerm:
        ident = (kind, name, pair, id(source) if source is not None else 0)
        found = self._roles.get(ident)
        if found is not None:
            return found
        match kind:
            case RoleKind.NAMED:
                key: SortKey = (kind.value, name)
            case RoleKind.PAIR:
                key = (kind.value, *(pair or ("", "")))
            case RoleKind.WITNESS:
                assert source is not None
                key = (kind.value, source.key)
            case _:
                key = (kind.value,)
        term = RoleTerm(kind, name, pair, source, key)
        self._roles[ident] = term
        return term

    def role(self, name: str) -> RoleTerm:
        return self._intern_role(RoleKind.NAMED, name=name)

    def pair(self, a: str, b: str) -> RoleTerm:
        return self._intern_role(RoleKind.PAIR, pair=(a, b))

    def witness(self, source: ConceptTerm) -> RoleTerm:
        """Witness role of an existential restriction."""
        if source.kind is not ConceptKind.EXISTS:
            msg = f"witness roles exist only for existential restrictions, got {source}"
            raise MalformedTermError(msg)
        return self._intern_role(RoleKind.WITNESS, source=source)

    # ─── Concepts ──────────────────────────────────────────────────────────────
    def _intern_concept(
        self,
        kind: ConceptKind,
        name: str = "",
        children: tuple[ConceptTerm, ...] = (),
        role: RoleTerm | None = None,
        side: Side | None = None,
    ) -> ConceptTerm:
        ident = (kind, name, tuple(map(id, children)), id(role) if role is not None else 0, side)
        found = self._concepts.get(ident)
        if found is not None:
            return found
        match kind:
            case ConceptKind.ATOM | ConceptKind.NOMINAL:
                key: SortKey = (kind.value, name)
            case ConceptKind.NOT:
                key = (kind.value, children[0].key)
            case ConceptKind.AND | ConceptKind.OR:
                key = (kind.value, tuple(c.key for c in children))
            case ConceptKind.EXISTS | ConceptKind.FORALL:
                assert role is not None
                key = (kind.value, role.key, children[0].key)
            case ConceptKind.PROJ:
                assert role is not None
                assert side is not None
                key = (kind.value, side.value, role.key)
            case _:
                key = (kind.value,)
        term = ConceptTerm(kind, name, children, role, side, key)
        self._concepts[ident] = term
        return term

    def atom(self, name: str) -> ConceptTerm:
        return self._intern_concept(ConceptKind.ATOM, name=name)

    def nominal(self, individual: str) -> ConceptTerm:
        return self._intern_concept(ConceptKind.NOMINAL, name=individual)

    def not_(self, operand: ConceptTerm) -> ConceptTerm:
        return self._intern_concept(ConceptKind.NOT, children=(operand,))

    def exists(self, role: RoleTerm, filler: ConceptTerm) -> ConceptTerm:
        return self._intern_concept(ConceptKind.EXISTS, children=(filler,), role=role)

    def forall(self, role: RoleTerm, filler: ConceptTerm) -> ConceptTerm:
        return self._intern_concept(ConceptKind.FORALL, children=(filler,), role=role)

    def proj(self, side: Side, role: RoleTerm) -> ConceptTerm:
        return self._intern_concept(ConceptKind.PROJ, role=role, side=side)

    def and_(self, operands: Iterable[ConceptTerm]) -> ConceptTerm:
        """Flattened, deduplicated, sorted conjunction; a single operand collapses to itself."""
        return self._junction(ConceptKind.AND, operands)

    def or_(self, operands: Iterable[ConceptTerm]) -> ConceptTerm:
        """Flattened, deduplicated, sorted disjunction; a single operand collapses to itself."""
        return self._junction(ConceptKind.OR, operands)

    def _junction(self, kind: ConceptKind, operands: Iterable[ConceptTerm]) -> ConceptTerm:
        flat: dict[ConceptTerm, None] = {}
        for term in operands:
            for part in term.children if term.kind is kind else (term,):
                flat[part] = None
        if not flat:
            msg = f"empty {kind.name.lower()} expression"
            raise MalformedTermError(msg)
        if len(flat) == 1:
            return next(iter(flat))
        return self._intern_concept(kind, children=tuple(sort_terms(flat)))

    def canonicalize(self, raw: RawConcept) -> ConceptTerm:
        """Intern a raw expression tree modulo associativity, commutativity and idempotence."""
        match raw.op:
            case RawOp.TOP:
                return self.top
            case RawOp.BOT:
                return self.bot
            case RawOp.ATOM:
                if not raw.name:
                    msg = "atom without a name"
                    raise MalformedTermError(msg)
                return self.atom(raw.name)
            case RawOp.NOT:
                if len(raw.args) != 1:
                    msg = f"'not' takes one operand, got {len(raw.args)}"
                    raise MalformedTermError(msg)
                return self.not_(self.canonicalize(raw.args[0]))
            case RawOp.AND:
                return self.and_(self.canonicalize(a) for a in raw.args)
            case RawOp.OR:
                return self.or_(self.canonicalize(a) for a in raw.args)
            case RawOp.SOME | RawOp.ONLY:
                if len(raw.args) != 1 or not raw.role:
                    msg = f"'{raw.op.value}' takes a role and one filler"
                    raise MalformedTermError(msg)
                build = self.exists if raw.op is RawOp.SOME else self.forall
                return build(self.role(raw.role), self.canonicalize(raw.args[0]))

    # ─── Negation normal form ──────────────────────────────────────────────────
    def nnf(self, t: ConceptTerm) -> ConceptTerm:
        """Push negations down to atoms."""
        cached = self._nnf.get(t)
        if cached is None:
            cached = self._nnf_uncached(t)
            self._nnf[t] = cached
        return cached

    def negate(self, t: ConceptTerm) -> ConceptTerm:
        """NNF of the complement of ``t``."""
        return self.nnf(self.not_(t))

    def _nnf_uncached(self, t: ConceptTerm) -> ConceptTerm:
        match t.kind:
            case ConceptKind.AND:
                return self.and_(self.nnf(c) for c in t.children)
            case ConceptKind.OR:
                return self.or_(self.nnf(c) for c in t.children)
            case ConceptKind.EXISTS | ConceptKind.FORALL:
                assert t.role is not None
                build = self.exists if t.kind is ConceptKind.EXISTS else self.forall
                return build(t.role, self.nnf(t.filler))
            case ConceptKind.NOT:
                return self._push_negation(t)
            case _:
                return t

    def _push_negation(self, t: ConceptTerm) -> ConceptTerm:
        inner = t.operand
        match inner.kind:
            case ConceptKind.TOP:
                return self.bot
            case ConceptKind.BOT:
                return self.top
            case ConceptKind.NOT:
                return self.nnf(inner.operand)
            case ConceptKind.AND:
                return self.or_(self.negate(c) for c in inner.children)
            case ConceptKind.OR:
                return self.and_(self.negate(c) for c in inner.children)
            case ConceptKind.EXISTS:
                assert inner.role is not None
                return self.forall(inner.role, self.negate(inner.filler))
            case ConceptKind.FORALL:
                assert inner.role is not None
                return self.exists(inner.role, self.negate(inner.filler))
            case _:
                return t
