# ♥♥─── Catdl Test Generator ───────────────────────────────
"""Seeded random ontologies and a brute-force small-domain model search."""

from __future__ import annotations

import random
import itertools
from dataclasses import field, dataclass

from loguru import logger

from .terms import ConceptTerm, TermFactory
from .errors import CombinatorialLimitError
from .ontology import CAA, GCI, ITR, RAA, RI, Axiom, Ontology
from .data_models import Profile
from .interpretation import TableauModel


PROFILE_CONSTRUCTORS = {
    Profile.SH: ("and", "or", "not", "some", "only"),
    Profile.EL_BOT_CIRC: ("and", "some"),
}

DEFAULT_WEIGHTS = {"and": 3.0, "or": 2.0, "not": 2.0, "some": 3.0, "only": 2.0}

AXIOM_WEIGHTS = {"GCI": 6.0, "CAA": 3.0, "RAA": 2.0, "RI": 1.0, "ITR": 1.0}


@dataclass
class GenConfig:
    """Configuration for one generated ontology."""

    seed: int = 0
    n_concepts: int = 4
    n_roles: int = 2
    n_individuals: int = 2
    n_axioms: int = 6
    max_depth: int = 2
    constructor_weights: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))
    profile: Profile = Profile.SH

    def __post_init__(self) -> None:
        """Reject empty signatures."""
        for name in ("n_concepts", "n_roles", "n_axioms"):
            if getattr(self, name) < 1:
                msg = f"{name} must be at least 1, got {getattr(self, name)}"
                raise ValueError(msg)
        if self.n_individuals < 0 or self.max_depth < 0:
            msg = "n_individuals and max_depth must not be negative"
            raise ValueError(msg)


# ─── Generator ─────────────────────────────────────────────────────────────────
class OntologyGenerator:
    """Handles the random choices behind one generated ontology."""

    def __init__(self, cfg: GenConfig, terms: TermFactory | None = None) -> None:
        self.cfg = cfg
        self.terms = terms or TermFactory()
        self.rng = random.Random(cfg.seed)
        self.concepts = [f"A{i}" for i in range(cfg.n_concepts)]
        self.roles = [f"R{i}" for i in range(cfg.n_roles)]
        self.individuals = [f"a{i}" for i in range(cfg.n_individuals)]
        allowed = PROFILE_CONSTRUCTORS[cfg.profile]
        self.constructors = [c for c in allowed if cfg.constructor_weights.get(c, 0.0) > 0]
        self.weights = [cfg.constructor_weights[c] for c in self.constructors]

    def concept(self, depth: int) -> ConceptTerm:
        """Random concept of nesting depth at most ``depth``."""
        terms, rng = self.terms, self.rng
        if depth == 0 or not self.constructors or rng.random() < 0.35:
            roll = rng.random()
            if roll < 0.05:
                return terms.top
            if roll < 0.08:
                return terms.bot
            return terms.atom(rng.choice(self.concepts))
        match rng.choices(self.constructors, self.weights)[0]:
            case "and":
                return terms.and_([self.concept(depth - 1), self.concept(depth - 1)])
            case "or":
                return terms.or_([self.concept(depth - 1), self.concept(depth - 1)])
            case "not":
                return terms.not_(self.concept(depth - 1))
            case "some":
                return terms.exists(terms.role(rng.choice(self.roles)), self.concept(depth - 1))
            case _:
                return terms.forall(terms.role(rng.choice(self.roles)), self.concept(depth - 1))

    def axiom(self) -> Axiom:
        terms, rng, depth = self.terms, self.rng, self.cfg.max_depth
        kinds = [k for k in AXIOM_WEIGHTS if self.individuals or k not in {"CAA", "RAA"}]
        match rng.choices(kinds, [AXIOM_WEIGHTS[k] for k in kinds])[0]:
            case "GCI":
                return GCI(self.concept(depth), self.concept(depth))
            case "CAA":
                return CAA(rng.choice(self.individuals), self.concept(depth))
            case "RAA":
                a, b = rng.choice(self.individuals), rng.choice(self.individuals)
                return RAA(a, b, terms.role(rng.choice(self.roles)))
            case "RI":
                return RI(terms.role(rng.choice(self.roles)), terms.role(rng.choice(self.roles)))
            case _:
                return ITR(terms.role(rng.choice(self.roles)))

    def generate(self) -> Ontology:
        axioms = [self.axiom() for _ in range(self.cfg.n_axioms)]
        return Ontology.build(self.terms, axioms, self.concepts, self.roles)


def generate(cfg: GenConfig, terms: TermFactory | None = None) -> Ontology:
    """Deterministic random ontology for ``cfg``."""
    return OntologyGenerator(cfg, terms).generate()


# ─── Brute-force oracle ────────────────────────────────────────────────────────
def _subsets[T](items: list[T]) -> list[frozenset[T]]:
    return [
        frozenset(combo) for size in range(len(items) + 1) for combo in itertools.combinations(items, size)
    ]


def brute_force_consistent(o: Ontology, domain_size: int, *, cap: int = 2_000_000) -> bool | None:
    """True when some interpretation with at most ``domain_size`` elements satisfies ``o``; None otherwise."""
    if domain_size not in {1, 2, 3}:
        msg = f"domain_size must be 1, 2 or 3, got {domain_size}"
        raise ValueError(msg)
    concepts, roles, individuals = sorted(o.concept_names), sorted(o.role_names), sorted(o.individuals)
    role_axioms = [a for a in o.axioms if isinstance(a, (RI, ITR, RAA))]
    concept_axioms = [a for a in o.axioms if isinstance(a, (GCI, CAA))]
    for size in range(1, domain_size + 1):
        space = 2 ** (len(concepts) * size) * 2 ** (len(roles) * size * size) * size ** len(individuals)
        if space > cap:
            msg = f"{space} interpretations over {size} elements exceed the cap of {cap}"
            raise CombinatorialLimitError(msg)
        domain = tuple(range(size))
        extensions = _subsets(list(domain))
        relations = _subsets(list(itertools.product(domain, domain)))
        for assignment in itertools.product(domain, repeat=len(individuals)):
            individual_map = dict(zip(individuals, assignment, strict=True))
            for role_choice in itertools.product(relations, repeat=len(roles)):
                role_extension = dict(zip(roles, role_choice, strict=True))
                frame = TableauModel(domain, {}, role_extension, individual_map)
                if not all(frame.satisfies(axiom) for axiom in role_axioms):
                    continue
                for concept_choice in itertools.product(extensions, repeat=len(concepts)):
                    concept_extension = dict(zip(concepts, concept_choice, strict=True))
                    model = TableauModel(domain, concept_extension, role_extension, individual_map)
                    if all(model.satisfies(axiom) for axiom in concept_axioms):
                        logger.debug("model found over {} elements", size)
                        return True
    return None
