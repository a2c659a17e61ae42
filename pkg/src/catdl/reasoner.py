# ♥♥─── Catdl Reasoner ─────────────────────────────────────
"""Runs the engines over ontology files and turns their verdicts into records."""

from __future__ import annotations

import re
import time
from pathlib import Path
from itertools import repeat
from dataclasses import field, dataclass
from concurrent.futures import ProcessPoolExecutor

from loguru import logger

from .terms import SortKey, ConceptTerm
from .errors import CatdlError, InputRejectedError, OntologyParseError, BudgetExceededError
from .parser import token_count, parse_concept, parse_ontology, parse_inclusion
from .records import (
    ModelRecord,
    ArrowRecord,
    StatsRecord,
    TraceRecord,
    VerdictRecord,
    EntailmentRecord,
)
from .ontology import Ontology
from .el_engine import ElEngine, entails_el
from .sh_engine import ShEngine, derive_check_sh
from .el_tableau import ElTableau, elbot_entails
from .sh_tableau import ShTableau, tableau_concept_unsat
from .data_models import Arrow, Engine, ExitCode, RunConfig, SaturationTrace
from .category_store import ROLE, CONCEPT, CategoryStore
from .interpretation import TableauModel


NOMINAL = re.compile(r"\{\s*([A-Za-z_][A-Za-z0-9_]*)\s*\}")


@dataclass
class Outcome:
    """What one engine found out about one ontology."""

    engine: Engine
    consistent: bool
    witness: str | None = None
    query_unsat: bool | None = None
    objects: int | None = None
    arrows: int | None = None
    nodes: int | None = None
    rule_counts: dict[str, int] = field(default_factory=dict)
    trace: SaturationTrace | None = None
    store: CategoryStore | None = None
    model: TableauModel | None = None


@dataclass
class DumpBundle:
    """Everything ``dump`` writes for one run."""

    arrows: list[ArrowRecord]
    trace: list[TraceRecord]
    model: ModelRecord | None = None

    def write(self, out_dir: Path) -> list[Path]:
        """Write ``arrows.jsonl``, ``trace.jsonl`` and, for tableau runs, ``model.json``."""
        out_dir.mkdir(exist_ok=True, parents=True)
        written = [out_dir / "arrows.jsonl", out_dir / "trace.jsonl"]
        written[0].write_text("".join(f"{r.to_json()}\n" for r in self.arrows), encoding="utf-8")
        written[1].write_text("".join(f"{r.to_json()}\n" for r in self.trace), encoding="utf-8")
        if self.model is not None:
            written.append(out_dir / "model.json")
            written[-1].write_text(self.model.to_json(indent=2), encoding="utf-8")
        return written


def dump_order(arrow: Arrow) -> tuple[int, SortKey, SortKey]:
    return (0 if arrow.side is CONCEPT else 1, arrow.source.key, arrow.target.key)


def dump_records(store: CategoryStore, trace: SaturationTrace) -> tuple[list[ArrowRecord], list[TraceRecord]]:
    """Number the canonical arrows of ``store`` in dump order, then the arrows the trace needs beyond them.

    Arrows out of an object below ⊥ are listed as that one arrow; the ones the trace still refers to come last.
    """
    listed = [arrow for side in (CONCEPT, ROLE) for arrow in store.arrows(side)]
    support = sorted(set(trace.derived_by).difference(listed), key=dump_order)
    ids = {arrow: index for index, arrow in enumerate([*listed, *support])}
    arrows: list[ArrowRecord] = []
    for arrow, index in ids.items():
        step = trace.step_for(arrow)
        arrows.append(
            ArrowRecord(
                id=index,
                side=arrow.side.value,
                source=str(arrow.source),
                target=str(arrow.target),
                tag=None if step is None else step.tag,
                premises=[] if step is None else [ids[p] for p in step.premises],
            )
        )
    steps = [
        TraceRecord(
            index=index,
            tag=step.tag,
            premises=[ids[p] for p in step.premises],
            conclusions=[ids[c] for c in step.conclusions],
        )
        for index, step in enumerate(trace.steps)
    ]
    return arrows, steps


def derivation(trace: SaturationTrace, arrow: Arrow, depth: int = 0, seen: set[Arrow] | None = None) -> list[str]:
    """Indented derivation tree of ``arrow``; an arrow already shown is not expanded again."""
    seen = set() if seen is None else seen
    pad = "  " * depth
    step = trace.step_for(arrow)
    if step is None:
        return [f"{pad}{arrow}"]
    line = f"{pad}{arrow}  [{step.tag}]"
    if arrow in seen:
        return [f"{line} (see above)"]
    seen.add(arrow)
    lines = [line]
    for premise in step.premises:
        lines += derivation(trace, premise, depth + 1, seen)
    return lines


# ─── Main Orchestrator ─────────────────────────────────────────────────────────
class Reasoner:
    """Main orchestrator that coordinates parsing, engine runs and reporting."""

    def __init__(self, config: RunConfig) -> None:
        self.config = config

    def load(self, path: Path) -> Ontology:
        logger.debug("reading {}", path)
        return parse_ontology(path.read_text(encoding="utf-8"))

    def query(self, o: Ontology) -> ConceptTerm | None:
        text = self.config.unsat_query
        return None if text is None else parse_concept(text, o.terms)

    # ─── Engines ───────────────────────────────────────────────────────────────
    def saturation(self, o: Ontology, engine: Engine) -> ShEngine | ElEngine:
        if engine is Engine.SH_CAT:
            return ShEngine(o, self.config.sh_options())
        return ElEngine(o, self.config.el_options())

    def run(self, o: Ontology, engine: Engine, query: ConceptTerm | None = None) -> Outcome:
        """Decide ``o`` with one engine, and the unsatisfiability of ``query`` when one is given."""
        logger.debug("running {} on {} axioms", engine.value, len(o.axioms))
        cfg = self.config
        match engine:
            case Engine.SH_CAT | Engine.EL_ARROW:
                saturation = self.saturation(o, engine)
                q = None if query is None else saturation.add_query(query)
                verdict = saturation.decide()
                return Outcome(
                    engine,
                    verdict.consistent,
                    verdict.witness,
                    query_unsat=None if q is None else verdict.inconsistent or saturation.is_bottom(q),
                    objects=verdict.store.object_count,
                    arrows=verdict.store.arrow_count,
                    rule_counts=dict(sorted(verdict.trace.rule_counts.items())),
                    trace=verdict.trace,
                    store=verdict.store,
                )
            case Engine.SH_TAB:
                sh_tableau = ShTableau(o, cfg.tableau_options())
                consistent, model = sh_tableau.run()
                query_unsat = None
                if query is not None:
                    query_unsat = not consistent or tableau_concept_unsat(o, query, cfg.tableau_options())
                return Outcome(
                    engine, consistent, sh_tableau.witness, query_unsat, nodes=sh_tableau.created, model=model,
                )
            case _:
                el_tableau = ElTableau(o, cfg.tableau_options())
                consistent, model = el_tableau.run()
                query_unsat = None
                if query is not None:
                    query_unsat = not consistent or elbot_entails(o, query, o.terms.bot, cfg.tableau_options())
                return Outcome(
                    engine, consistent, el_tableau.witness, query_unsat, nodes=el_tableau.created, model=model,
                )

    @staticmethod
    def require_entailment(*engines: Engine | None) -> None:
        for engine in engines:
            if engine is not None and not engine.decides_entailment:
                msg = f"{engine.value} does not decide entailment; use sh-cat, el-arrow or el-tab"
                raise InputRejectedError(msg)

    def entails(self, o: Ontology, engine: Engine, c: ConceptTerm, d: ConceptTerm) -> bool:
        self.require_entailment(engine)
        cfg = self.config
        match engine:
            case Engine.SH_CAT:
                return derive_check_sh(o, c, d, cfg.sh_options())
            case Engine.EL_ARROW:
                return entails_el(o, c, d, cfg.el_options())
            case _:
                return elbot_entails(o, c, d, cfg.tableau_options())

    # ─── Commands ──────────────────────────────────────────────────────────────
    def check(self, path: Path) -> VerdictRecord:
        """Check one file; every failure is reported in the record instead of being raised."""
        cfg, started = self.config, time.perf_counter()
        try:
            o = self.load(path)
            query = self.query(o)
            outcome = self.run(o, cfg.engine, query)
            oracle = None if cfg.oracle is None else self.run(o, cfg.oracle, query)
        except BudgetExceededError as exc:
            return VerdictRecord(
                file=str(path),
                engine=cfg.engine.value,
                exit_code=ExitCode.BUDGET,
                objects=exc.objects or None,
                arrows=exc.arrows or None,
                nodes=exc.nodes or None,
                wall_time=time.perf_counter() - started,
                error=str(exc),
            )
        except (OSError, CatdlError) as exc:
            logger.debug("{} rejected: {}", path, exc)
            return VerdictRecord(file=str(path), engine=cfg.engine.value, exit_code=ExitCode.USAGE, error=str(exc))

        exit_code = ExitCode.CONSISTENT if outcome.consistent else ExitCode.INCONSISTENT
        if oracle is not None and (oracle.consistent, oracle.query_unsat) != (outcome.consistent, outcome.query_unsat):
            logger.warning("{}: {} and {} disagree", path, cfg.engine.value, oracle.engine.value)
            exit_code = ExitCode.DISAGREEMENT
        return VerdictRecord(
            file=str(path),
            engine=cfg.engine.value,
            exit_code=exit_code,
            consistent=outcome.consistent,
            witness=outcome.witness,
            query=None if query is None else str(query),
            query_unsat=outcome.query_unsat,
            objects=outcome.objects,
            arrows=outcome.arrows,
            nodes=outcome.nodes,
            oracle=None if oracle is None else oracle.engine.value,
            oracle_consistent=None if oracle is None else oracle.consistent,
            rule_counts=outcome.rule_counts,
            wall_time=time.perf_counter() - started,
        )

    def check_files(self, paths: list[Path], jobs: int = 1) -> list[VerdictRecord]:
        """Check several files, in worker processes when ``jobs > 1``; records come back in input order."""
        if jobs <= 1 or len(paths) <= 1:
            return [self.check(path) for path in paths]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_check_file, repeat(self.config), paths))

    def entail(self, path: Path, query_text: str) -> EntailmentRecord:
        cfg = self.config
        self.require_entailment(cfg.engine, cfg.oracle)
        o = self.load(path)
        c, d = parse_inclusion(query_text, o.terms)
        entailed = self.entails(o, cfg.engine, c, d)
        oracle_entailed = None if cfg.oracle is None else self.entails(o, cfg.oracle, c, d)
        exit_code = ExitCode.ENTAILED if entailed else ExitCode.NOT_ENTAILED
        if oracle_entailed is not None and oracle_entailed != entailed:
            exit_code = ExitCode.DISAGREEMENT
        return EntailmentRecord(
            file=str(path),
            engine=cfg.engine.value,
            query=f"{c} <= {d}",
            entailed=entailed,
            oracle=None if cfg.oracle is None else cfg.oracle.value,
            oracle_entailed=oracle_entailed,
            exit_code=exit_code,
        )

    def dump(self, path: Path) -> DumpBundle:
        """Arrow and trace records of a saturation run, or the model of a tableau run."""
        o = self.load(path)
        outcome = self.run(o, self.config.engine, self.query(o))
        if outcome.store is None or outcome.trace is None:
            return DumpBundle([], [], None if outcome.model is None else outcome.model.to_record())
        arrows, steps = dump_records(outcome.store, outcome.trace)
        return DumpBundle(arrows, steps)

    def stats(self, path: Path, after: Engine | None = None) -> StatsRecord:
        o = self.load(path)
        if after is None:
            return StatsRecord(file=str(path), tokens=token_count(o), axioms=o.counts_by_kind())
        if not after.is_categorical:
            msg = f"--after-saturation takes sh-cat or el-arrow, got {after.value}"
            raise InputRejectedError(msg)
        bound = ratio = None
        if after is Engine.EL_ARROW:
            el = ElEngine(o, self.config.el_options()).decide()
            objects, arrows = el.object_count, el.store.arrow_count
            bound, ratio = el.bound, el.object_count / el.bound
        else:
            sh = ShEngine(o, self.config.sh_options()).decide()
            objects, arrows = sh.store.object_count, sh.store.arrow_count
        return StatsRecord(
            file=str(path),
            tokens=token_count(o),
            axioms=o.counts_by_kind(),
            engine=after.value,
            objects=objects,
            arrows=arrows,
            bound=bound,
            bound_ratio=ratio,
        )

    @staticmethod
    def endpoints(o: Ontology, arrow_text: str) -> tuple[ConceptTerm, ConceptTerm]:
        """Both sides of ``X <= Y``, where a side may also be a nominal ``{a}``."""
        lhs, sep, rhs = arrow_text.partition("<=")
        if not sep:
            raise OntologyParseError("expected 'X <= Y'", 1, 1)
        sides: list[ConceptTerm] = []
        for text in (lhs.strip(), rhs.strip()):
            nominal = NOMINAL.fullmatch(text)
            sides.append(o.terms.nominal(nominal[1]) if nominal else parse_concept(text, o.terms))
        return sides[0], sides[1]

    def explain(self, path: Path, arrow_text: str) -> list[str] | None:
        """Derivation tree of the concept arrow ``X <= Y``; None when the saturated store lacks it."""
        engine = self.config.engine
        if not engine.is_categorical:
            msg = f"{engine.value} keeps no derivations; use sh-cat or el-arrow"
            raise InputRejectedError(msg)
        o = self.load(path)
        x, y = self.endpoints(o, arrow_text)
        saturation = self.saturation(o, engine)
        x, y = saturation.add_query(x), saturation.add_query(y)
        saturation.decide()
        if not saturation.has(x, y):
            return None
        trace, arrow = saturation.trace, Arrow(CONCEPT, x, y)
        if trace.step_for(arrow) is None and saturation.is_bottom(x) and y is not o.terms.bot:
            bottom = Arrow(CONCEPT, x, o.terms.bot)
            return [f"{arrow}  [below Bot]", *derivation(trace, bottom, 1)]
        return derivation(trace, arrow)


def _check_file(config: RunConfig, path: Path) -> VerdictRecord:
    return Reasoner(config).check(path)
