"""Seeded random suites that cross-check the engines against each other."""

from __future__ import annotations

import os
import math
import time
import statistics
from dataclasses import replace
from collections.abc import Iterable

import pytest

from catdl.errors import BudgetExceededError
from catdl.parser import token_count, parse_ontology
from catdl.testgen import GenConfig, OntologyGenerator, generate
from catdl.ontology import Ontology
from catdl.el_engine import entails_el, saturate_el
from catdl.sh_engine import saturate_sh
from catdl.el_tableau import elbot_entails, elbot_consistent
from catdl.sh_tableau import tableau_consistent
from catdl.data_models import Arrow, Profile, TableauOptions, ElEngineOptions, ShEngineOptions
from catdl.category_store import CONCEPT

SUITE_SIZE = int(os.environ.get("CATDL_SUITE_SIZE", "500"))

SH_BUDGET = ShEngineOptions(budget_steps=2_000_000)
TABLEAU_BUDGET = TableauOptions(budget_nodes=50_000)
# full generator size; a seed past either budget is skipped
FULL_SH_BUDGET = ShEngineOptions(budget_steps=100_000)
FULL_TABLEAU_BUDGET = TableauOptions(budget_nodes=20_000)

pytestmark = pytest.mark.slow


def sh_instance(seed: int) -> Ontology:
    return generate(GenConfig(seed=seed, n_concepts=4, n_roles=2, n_individuals=2, n_axioms=6, max_depth=2))


def full_sh_instance(seed: int) -> Ontology:
    return generate(GenConfig(seed=seed, n_concepts=6, n_roles=3, n_individuals=3, n_axioms=10, max_depth=3))


def el_config(seed: int) -> GenConfig:
    return GenConfig(
        seed=seed, n_concepts=5, n_roles=2, n_individuals=2, n_axioms=8, max_depth=3, profile=Profile.EL_BOT_CIRC
    )


# ─── SH ────────────────────────────────────────────────────────────────────────
@pytest.mark.parametrize("seed", range(SUITE_SIZE))
def test_sh_saturation_agrees_with_the_tableau(seed: int) -> None:
    o = full_sh_instance(seed)
    try:
        categorical = saturate_sh(o, FULL_SH_BUDGET)
        consistent, model = tableau_consistent(o, FULL_TABLEAU_BUDGET)
        without_rules, _ = tableau_consistent(o, replace(FULL_TABLEAU_BUDGET, forall_exists=False))
        weakened = saturate_el(o)
    except BudgetExceededError:
        pytest.skip("budget exhausted")
    assert categorical.consistent == consistent
    assert without_rules == consistent
    if model is not None:
        assert model.violations(o) == []
    # weakening only loses consequences
    if weakened.inconsistent:
        assert categorical.inconsistent


@pytest.mark.parametrize("seed", range(min(200, SUITE_SIZE)))
def test_small_sh_saturation_agrees_with_the_tableau(seed: int) -> None:
    o = sh_instance(seed)
    try:
        categorical = saturate_sh(o, SH_BUDGET)
        consistent, _ = tableau_consistent(o, TABLEAU_BUDGET)
    except BudgetExceededError:
        pytest.skip("budget exhausted")
    assert categorical.consistent == consistent


# ─── EL ────────────────────────────────────────────────────────────────────────
@pytest.mark.parametrize("seed", range(SUITE_SIZE))
def test_el_saturation_agrees_with_the_tableau(seed: int) -> None:
    o = generate(el_config(seed))
    verdict = saturate_el(o)
    consistent, model = elbot_consistent(o)
    assert verdict.consistent == consistent
    assert verdict.object_count <= verdict.bound
    if model is not None:
        assert model.violations(o) == []


@pytest.mark.parametrize("seed", range(max(200, SUITE_SIZE // 2)))
def test_el_entailment_agrees_with_the_tableau(seed: int) -> None:
    gen = OntologyGenerator(el_config(seed))
    o = gen.generate()
    c, d = gen.concept(2), gen.concept(2)
    assert entails_el(o, c, d) == elbot_entails(o, c, d)


# ─── Confluence ────────────────────────────────────────────────────────────────
def _sorted_dump(arrows: Iterable[Arrow]) -> list[str]:
    return sorted(str(arrow) for arrow in arrows)


@pytest.mark.parametrize("seed", range(min(50, SUITE_SIZE)))
def test_rule_schedule_does_not_change_the_saturation(seed: int) -> None:
    sh, el = sh_instance(seed), generate(el_config(seed))
    try:
        sh_dumps = {
            tuple(_sorted_dump(saturate_sh(sh, ShEngineOptions(2_000_000, schedule_seed=s)).store.arrows(CONCEPT)))
            for s in (None, 1, 2, 3, 4)
        }
    except BudgetExceededError:
        pytest.skip("budget exhausted")
    el_dumps = {
        tuple(_sorted_dump(saturate_el(el, ElEngineOptions(schedule_seed=s)).store.arrows(CONCEPT)))
        for s in (None, 1, 2, 3, 4)
    }
    assert len(sh_dumps) == 1
    assert len(el_dumps) == 1


# ─── Scaling ───────────────────────────────────────────────────────────────────
def chain(length: int) -> str:
    lines = [f"A{i} <= (some S (and A{i + 1} B{i % 3}))" for i in range(length)]
    return "\n".join([*lines, "trans S", "a : A0", ""])


def test_el_saturation_grows_polynomially() -> None:
    sizes: list[float] = []
    times: list[float] = []
    for length in (6, 12, 24, 48):
        o = parse_ontology(chain(length))
        runs = []
        for _ in range(3):
            started = time.perf_counter()
            verdict = saturate_el(o)
            runs.append(time.perf_counter() - started)
        assert verdict.consistent
        assert verdict.object_count <= verdict.bound
        sizes.append(math.log(token_count(o)))
        times.append(math.log(statistics.median(runs)))
    slope, _ = statistics.linear_regression(sizes, times)
    assert slope < 6
