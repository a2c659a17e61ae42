from __future__ import annotations

import time
from enum import Enum, IntEnum
from typing import NamedTuple
from collections import Counter
from dataclasses import field, dataclass

from .terms import RoleTerm, ConceptTerm


# ─── Enumerations ──────────────────────────────────────────────────────────────
class Engine(Enum):
    """Enumeration for the four interchangeable reasoning engines."""

    SH_CAT = "sh-cat"
    SH_TAB = "sh-tab"
    EL_ARROW = "el-arrow"
    EL_TAB = "el-tab"

    @property
    def is_categorical(self) -> bool:
        return self in {Engine.SH_CAT, Engine.EL_ARROW}

    @property
    def decides_entailment(self) -> bool:
        return self is not Engine.SH_TAB


class OutputFormat(Enum):
    """Enumeration for report formats."""

    TEXT = "text"
    JSON = "json"


class Profile(Enum):
    """Enumeration for the generator's language profiles."""

    SH = "SH"
    EL_BOT_CIRC = "EL_bot_circ"


class ExitCode(IntEnum):
    """Process exit codes of the command line."""

    CONSISTENT = 0
    INCONSISTENT = 1
    USAGE = 2
    BUDGET = 3
    DISAGREEMENT = 4
    ENTAILED = 0
    NOT_ENTAILED = 1


class CategorySide(Enum):
    """Enumeration for the two categories of a store."""

    CONCEPT = "concept"
    ROLE = "role"


# ─── Arrows and traces ─────────────────────────────────────────────────────────
class Arrow(NamedTuple):
    """An arrow ``source → target`` in the concept or the role category."""

    side: CategorySide
    source: ConceptTerm | RoleTerm
    target: ConceptTerm | RoleTerm

    def __str__(self) -> str:
        return f"{self.source} -> {self.target}"


@dataclass(frozen=True, slots=True)
class TraceStep:
    """One rule firing: its tag, the arrows it used and the arrows it produced."""

    tag: str
    premises: tuple[Arrow, ...]
    conclusions: tuple[Arrow, ...]


@dataclass
class SaturationTrace:
    """Data structure for the derivation history and statistics of one saturation run."""

    steps: list[TraceStep] = field(default_factory=list)
    rule_counts: Counter[str] = field(default_factory=Counter)
    derived_by: dict[Arrow, int] = field(default_factory=dict)
    objects: int = 0
    arrows: int = 0
    wall_time: float = 0.0
    _started: float = field(default_factory=time.perf_counter, repr=False)

    def record(self, tag: str, premises: tuple[Arrow, ...], conclusions: tuple[Arrow, ...]) -> None:
        """Append a step; each conclusion keeps the first step that derived it."""
        index = len(self.steps)
        self.steps.append(TraceStep(tag, premises, conclusions))
        self.rule_counts[tag] += 1
        for arrow in conclusions:
            self.derived_by.setdefault(arrow, index)

    def step_for(self, arrow: Arrow) -> TraceStep | None:
        index = self.derived_by.get(arrow)
        return None if index is None else self.steps[index]

    def finish(self, objects: int, arrows: int) -> None:
        self.objects = objects
        self.arrows = arrows
        self.wall_time = time.perf_counter() - self._started

    @property
    def fired(self) -> int:
        """Total number of rule firings."""
        return sum(self.rule_counts.values())


# ─── Per-run options ───────────────────────────────────────────────────────────
@dataclass
class ShEngineOptions:
    """Configuration for one SH saturation run."""

    budget_steps: int = 10_000_000
    distribution: bool = True
    case_split: bool = True
    schedule_seed: int | None = None
    # ∃/∀ interaction and distribution on every object instead of the node-like ones
    all_objects: bool = False

    def __post_init__(self) -> None:
        """Reject a non-positive step budget."""
        if self.budget_steps <= 0:
            msg = f"budget_steps must be positive, got {self.budget_steps}"
            raise ValueError(msg)


@dataclass
class ElEngineOptions:
    """Configuration for one EL→ saturation run."""

    schedule_seed: int | None = None


@dataclass
class TableauOptions:
    """Configuration for one tableau run."""

    budget_nodes: int = 1_000_000
    forall_exists: bool = True

    def __post_init__(self) -> None:
        """Reject a non-positive node budget."""
        if self.budget_nodes <= 0:
            msg = f"budget_nodes must be positive, got {self.budget_nodes}"
            raise ValueError(msg)


@dataclass
class RunConfig:
    """Configuration for one command: the engine, its cross-check oracle and the resource limits."""

    engine: Engine = Engine.SH_CAT
    oracle: Engine | None = None
    budget_steps: int = 10_000_000
    budget_nodes: int = 1_000_000
    forall_exists: bool = True
    distribution: bool = True
    schedule_seed: int | None = None
    unsat_query: str | None = None

    def sh_options(self) -> ShEngineOptions:
        return ShEngineOptions(
            budget_steps=self.budget_steps,
            distribution=self.distribution,
            schedule_seed=self.schedule_seed,
        )

    def el_options(self) -> ElEngineOptions:
        return ElEngineOptions(schedule_seed=self.schedule_seed)

    def tableau_options(self) -> TableauOptions:
        return TableauOptions(budget_nodes=self.budget_nodes, forall_exists=self.forall_exists)
