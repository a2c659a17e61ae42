# ♥♥─── Catdl Records ──────────────────────────────────────
"""Machine-readable shapes of everything the command line writes as JSON."""

from __future__ import annotations

from typing import Any, Literal

from pydantic import Field, BaseModel, ConfigDict


class _Record(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    def to_json(self, **kwargs: Any) -> str:
        """JSON under the external field names."""
        return self.model_dump_json(by_alias=True, **kwargs)


class ArrowRecord(_Record):
    """One line of an arrow dump; ``premises`` are ids of other records of the same dump."""

    id: int = Field(ge=0)
    side: Literal["concept", "role"]
    source: str = Field(alias="from")
    target: str = Field(alias="to")
    tag: str | None = Field(default=None, alias="rule-tag")
    premises: list[int] = Field(default_factory=list, alias="premise-arrow-ids")


class TraceRecord(_Record):
    """One rule firing of a saturation trace, with arrows given by their dump ids."""

    index: int = Field(ge=0)
    tag: str
    premises: list[int]
    conclusions: list[int]


class ModelRecord(_Record):
    """A finite interpretation read off a complete clash-free tableau."""

    domain: list[int]
    concepts: dict[str, list[int]]
    roles: dict[str, list[tuple[int, int]]]
    individuals: dict[str, int]


class VerdictRecord(_Record):
    """Result of ``catdl check`` for one file."""

    file: str
    engine: str
    exit_code: int
    consistent: bool | None = None
    witness: str | None = None
    query: str | None = None
    query_unsat: bool | None = None
    objects: int | None = None
    arrows: int | None = None
    nodes: int | None = None
    oracle: str | None = None
    oracle_consistent: bool | None = None
    rule_counts: dict[str, int] = Field(default_factory=dict)
    wall_time: float = 0.0
    error: str | None = None


class EntailmentRecord(_Record):
    """Result of ``catdl entail``."""

    file: str
    engine: str
    query: str
    entailed: bool
    oracle: str | None = None
    oracle_entailed: bool | None = None
    exit_code: int


class StatsRecord(_Record):
    """Result of ``catdl stats``."""

    file: str
    tokens: int
    axioms: dict[str, int]
    engine: str | None = None
    objects: int | None = None
    arrows: int | None = None
    bound: int | None = None
    bound_ratio: float | None = None
