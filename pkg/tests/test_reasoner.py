from __future__ import annotations

import json
from pathlib import Path
from collections.abc import Callable

import pytest

from catdl.config import ReasonerSettings
from catdl.errors import InputRejectedError
from catdl.parser import parse_concept
from catdl.reasoner import Reasoner
from catdl.data_models import Engine, ExitCode, RunConfig

type WriteOnto = Callable[..., Path]


def test_check_reports_the_witness(onto_file: WriteOnto, transitive_clash: str) -> None:
    record = Reasoner(RunConfig(oracle=Engine.SH_TAB)).check(onto_file(transitive_clash))
    assert record.exit_code == ExitCode.INCONSISTENT
    assert record.consistent is False
    assert record.witness == "a"
    assert record.oracle == "sh-tab"
    assert record.oracle_consistent is False
    assert record.rule_counts


@pytest.mark.parametrize(
    ("config", "budget_field"),
    [
        (RunConfig(budget_steps=5), "objects"),
        (RunConfig(engine=Engine.SH_TAB, budget_nodes=1), "nodes"),
    ],
)
def test_budget_exhaustion_is_a_verdict(
    config: RunConfig, budget_field: str, onto_file: WriteOnto, transitive_clash: str
) -> None:
    record = Reasoner(config).check(onto_file(transitive_clash))
    assert record.exit_code == ExitCode.BUDGET
    assert record.consistent is None
    assert getattr(record, budget_field)
    assert record.error is not None


@pytest.mark.parametrize("engine", [Engine.SH_CAT, Engine.EL_ARROW])
def test_empty_top_with_roles_is_inconsistent(engine: Engine, onto_file: WriteOnto) -> None:
    record = Reasoner(RunConfig(engine=engine)).check(onto_file("Top <= Bot\na : (some R A)\n"))
    assert record.exit_code == ExitCode.INCONSISTENT
    assert record.witness == "a"


def test_unreadable_input_is_a_usage_error(tmp_path: Path, onto_file: WriteOnto) -> None:
    reasoner = Reasoner(RunConfig())
    assert reasoner.check(tmp_path / "missing.onto").exit_code == ExitCode.USAGE
    record = reasoner.check(onto_file("a : (foo A)\n"))
    assert record.exit_code == ExitCode.USAGE
    assert "1:" in (record.error or "")


def test_disagreeing_oracle(onto_file: WriteOnto, ternary_clash: str) -> None:
    config = RunConfig(engine=Engine.EL_ARROW, oracle=Engine.SH_CAT, unsat_query="A0")
    record = Reasoner(config).check(onto_file(ternary_clash))
    assert record.consistent is True
    assert record.query_unsat is False
    assert record.exit_code == ExitCode.DISAGREEMENT


def test_agreeing_tableau_oracle_on_a_query(onto_file: WriteOnto, disjunctive_clash: str) -> None:
    config = RunConfig(engine=Engine.SH_CAT, oracle=Engine.SH_TAB, unsat_query="A0")
    record = Reasoner(config).check(onto_file(disjunctive_clash))
    assert record.exit_code == ExitCode.CONSISTENT
    assert record.query == "A0"
    assert record.query_unsat is True


def test_check_files_keeps_the_input_order(onto_file: WriteOnto, transitive_clash: str) -> None:
    paths = [onto_file(transitive_clash, "first.onto"), onto_file("a : A\n", "second.onto")]
    records = Reasoner(RunConfig()).check_files(paths, jobs=2)
    assert [r.file for r in records] == [str(p) for p in paths]
    assert [r.exit_code for r in records] == [ExitCode.INCONSISTENT, ExitCode.CONSISTENT]


# ─── Entailment ────────────────────────────────────────────────────────────────
@pytest.mark.parametrize("engine", [Engine.SH_CAT, Engine.EL_ARROW, Engine.EL_TAB])
def test_entail_through_a_role_inclusion(engine: Engine, onto_file: WriteOnto) -> None:
    path = onto_file("R <= S\n")
    reasoner = Reasoner(RunConfig(engine=engine))
    assert reasoner.entail(path, "(some R B) <= (some S B)").exit_code == ExitCode.ENTAILED
    record = reasoner.entail(path, "(some S B) <= (some R B)")
    assert record.entailed is False
    assert record.exit_code == ExitCode.NOT_ENTAILED


def test_tableau_for_sh_does_not_decide_entailment(tmp_path: Path) -> None:
    # rejected before the file is read
    missing = tmp_path / "missing.onto"
    with pytest.raises(InputRejectedError):
        Reasoner(RunConfig(engine=Engine.SH_TAB)).entail(missing, "A <= A")
    with pytest.raises(InputRejectedError):
        Reasoner(RunConfig(oracle=Engine.SH_TAB)).entail(missing, "A <= A")


# ─── Dump, stats and explain ───────────────────────────────────────────────────
def test_dump_writes_arrows_and_trace(tmp_path: Path, onto_file: WriteOnto, transitive_clash: str) -> None:
    bundle = Reasoner(RunConfig()).dump(onto_file(transitive_clash))
    assert any(r.side == "concept" and (r.source, r.target) == ("{a}", "Bot") for r in bundle.arrows)
    assert [r.id for r in bundle.arrows] == list(range(len(bundle.arrows)))
    assert [r.index for r in bundle.trace] == list(range(len(bundle.trace)))
    written = bundle.write(tmp_path / "out")
    assert [p.name for p in written] == ["arrows.jsonl", "trace.jsonl"]
    lines = written[0].read_text(encoding="utf-8").splitlines()
    assert len(lines) == len(bundle.arrows)
    assert set(json.loads(lines[0])) == {"id", "side", "from", "to", "rule-tag", "premise-arrow-ids"}


def test_dumped_trace_is_a_derivation_dag(onto_file: WriteOnto, transitive_clash: str) -> None:
    bundle = Reasoner(RunConfig()).dump(onto_file(transitive_clash))
    concluded: set[int] = set()
    for step in bundle.trace:
        assert set(step.premises) <= concluded
        concluded.update(step.conclusions)
    assert concluded == {r.id for r in bundle.arrows}
    by_id = {r.id: r for r in bundle.arrows}
    for record in bundle.arrows:
        assert record.tag is not None
        assert all(p in by_id and p != record.id for p in record.premises)


def test_dump_of_a_tableau_run_is_a_model(tmp_path: Path, onto_file: WriteOnto) -> None:
    bundle = Reasoner(RunConfig(engine=Engine.SH_TAB)).dump(onto_file("a : A\n"))
    assert bundle.arrows == []
    assert bundle.model is not None
    assert bundle.model.concepts == {"A": [0]}
    assert bundle.write(tmp_path)[-1].name == "model.json"


def test_stats(onto_file: WriteOnto, transitive_clash: str) -> None:
    reasoner = Reasoner(RunConfig())
    path = onto_file(transitive_clash)
    record = reasoner.stats(path)
    assert record.tokens == 26
    assert record.axioms == {"GCI": 1, "RI": 0, "ITR": 1, "CAA": 2, "RAA": 0}
    assert record.engine is None

    after = reasoner.stats(onto_file("A <= (some R B)\nB <= C\n", "chain.onto"), Engine.EL_ARROW)
    assert after.objects is not None
    assert after.bound is not None
    assert after.objects <= after.bound
    with pytest.raises(InputRejectedError):
        reasoner.stats(path, Engine.SH_TAB)


def test_explain(onto_file: WriteOnto, transitive_clash: str) -> None:
    reasoner = Reasoner(RunConfig())
    lines = reasoner.explain(onto_file(transitive_clash), "{a} <= Bot")
    assert lines is not None
    assert lines[0].startswith("{a} -> Bot")
    assert all(line.startswith("  ") for line in lines[1:])

    path = onto_file("a : A\nA <= B\n", "consistent.onto")
    assert reasoner.explain(path, "A <= B") is not None
    assert reasoner.explain(path, "B <= A") is None
    with pytest.raises(InputRejectedError):
        Reasoner(RunConfig(engine=Engine.EL_TAB)).explain(path, "A <= B")


def test_endpoints_accept_nominals(onto_file: WriteOnto) -> None:
    o = Reasoner(RunConfig()).load(onto_file("a : A\n"))
    x, y = Reasoner.endpoints(o, "{ a } <= (and A B)")
    assert x is o.terms.nominal("a")
    assert y is parse_concept("(and A B)", o.terms)


# ─── Settings ──────────────────────────────────────────────────────────────────
def test_settings_come_from_the_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("CATDL_BUDGET_STEPS", "7")
    monkeypatch.setenv("CATDL_JOBS", "3")
    settings = ReasonerSettings()
    assert (settings.budget_steps, settings.jobs) == (7, 3)
    assert settings.run_config().budget_steps == 7
    assert settings.run_config(budget_steps=9, engine=Engine.EL_TAB).budget_steps == 9


def test_settings_reject_non_positive_budgets(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("CATDL_BUDGET_NODES", "0")
    with pytest.raises(ValueError):
        ReasonerSettings()
