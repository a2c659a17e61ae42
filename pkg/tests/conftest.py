from __future__ import annotations

from pathlib import Path
from collections.abc import Callable

import pytest

from catdl.terms import TermFactory


# ─── Ontologies ────────────────────────────────────────────────────────────────
TRANSITIVE_CLASH = """\
a : (some S C)
a : (only S (not D))
C <= (some S D)
trans S
"""

MEDICATION = """\
# a patient given penicillin while nothing given to the patient may be penicillin or aspirin
X : (and (some medWith Penicillin) (only medWith (not Penicillin)) (only medWith (not Aspirin)))
"""

TERNARY_CLASH = """\
A0 <= (and (some R C1) (only R C2) (only R C3))
(and C1 C2 C3) <= Bot
"""

DISJUNCTIVE_CLASH = """\
A0 <= (and C1 (or C2 C3))
(and C1 C2) <= Bot
(and C1 C3) <= Bot
"""


@pytest.fixture
def terms() -> TermFactory:
    return TermFactory()


@pytest.fixture
def transitive_clash() -> str:
    return TRANSITIVE_CLASH


@pytest.fixture
def medication() -> str:
    return MEDICATION


@pytest.fixture
def ternary_clash() -> str:
    return TERNARY_CLASH


@pytest.fixture
def disjunctive_clash() -> str:
    return DISJUNCTIVE_CLASH


@pytest.fixture
def onto_file(tmp_path: Path) -> Callable[[str, str], Path]:
    """Write ontology text to a file under ``tmp_path``."""

    def write(text: str, name: str = "ontology.onto") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return write


# ─── Helpers ───────────────────────────────────────────────────────────────────
def warshall[T](nodes: list[T], edges: set[tuple[T, T]]) -> set[tuple[T, T]]:
    """Reflexive-transitive closure of ``edges`` over ``nodes``, computed row by row."""
    reach = {x: {x} | {y for (s, y) in edges if s == x} for x in nodes}
    for k in nodes:
        for x in nodes:
            if k in reach[x]:
                reach[x] |= reach[k]
    return {(x, y) for x in nodes for y in reach[x]}
