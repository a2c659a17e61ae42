# ♥♥─── Catdl Command Line ─────────────────────────────────
from __future__ import annotations

from typing import Any
from pathlib import Path

from loguru import logger

from rich.table import Table
from rich.console import Console

import typer

from .log import configure_logging
from .config import ReasonerSettings
from .errors import CatdlError, BudgetExceededError
from .parser import print_ontology
from .records import StatsRecord, VerdictRecord, EntailmentRecord
from .testgen import GenConfig, generate
from .reasoner import Reasoner
from .data_models import Engine, Profile, ExitCode, RunConfig, OutputFormat


# ─── CLI Application ───────────────────────────────────────────────────────────
app = typer.Typer(help="Categorical description-logic reasoner for SH and EL→.", no_args_is_help=True)
console = Console(soft_wrap=True, highlight=False)


@app.callback()
def main(verbose: bool = typer.Option(False, "--verbose", "-v", help="Log engine progress to stderr")) -> None:
    """Categorical description-logic reasoner for SH and EL→."""
    configure_logging(verbose=verbose)


def fail(message: str, code: ExitCode) -> typer.Exit:
    console.print(f"💥 {message}", style="bold red")
    return typer.Exit(code=code)


def build_config(**knobs: Any) -> RunConfig:
    try:
        return ReasonerSettings().run_config(**knobs)
    except ValueError as e:
        raise fail(str(e), ExitCode.USAGE) from e


# ─── Reports ───────────────────────────────────────────────────────────────────
def print_verdict(record: VerdictRecord, output: OutputFormat) -> None:
    if output is OutputFormat.JSON:
        typer.echo(record.to_json())
        return
    if record.error is not None:
        icon = "⏳" if record.exit_code == ExitCode.BUDGET else "❌"
        console.print(f"{icon} {record.file}: {record.error}", style="bold red")
        return
    if record.consistent:
        console.print(f"✅ {record.file}: consistent ({record.engine})", style="bold green")
    else:
        console.print(f"⛔ {record.file}: inconsistent ({record.engine}), witness {record.witness}", style="bold red")
    if record.query is not None:
        verdict = "unsatisfiable" if record.query_unsat else "satisfiable"
        console.print(f"🔎 {record.query} is {verdict}", style="cyan")
    if record.oracle is not None:
        agreed = "agrees" if record.exit_code != ExitCode.DISAGREEMENT else "DISAGREES"
        console.print(f"⚖️  oracle {record.oracle} {agreed}", style="yellow")
    counts = ((record.objects, "objects"), (record.arrows, "arrows"), (record.nodes, "nodes"))
    sizes = ", ".join(f"{n} {what}" for n, what in counts if n is not None)
    console.print(f"📊 {sizes} in {record.wall_time:.3f}s", style="dim")
    if record.rule_counts:
        fired = ", ".join(f"{tag}={count}" for tag, count in record.rule_counts.items())
        console.print(f"🔧 {fired}", style="dim")


def print_entailment(record: EntailmentRecord, output: OutputFormat) -> None:
    if output is OutputFormat.JSON:
        typer.echo(record.to_json())
        return
    if record.entailed:
        console.print(f"✅ {record.query} is entailed ({record.engine})", style="bold green")
    else:
        console.print(f"➖ {record.query} is not entailed ({record.engine})", style="bold yellow")
    if record.oracle is not None:
        console.print(f"⚖️  oracle {record.oracle}: {'entailed' if record.oracle_entailed else 'not entailed'}")


def print_stats(record: StatsRecord, output: OutputFormat) -> None:
    if output is OutputFormat.JSON:
        typer.echo(record.to_json())
        return
    table = Table(title=f"📏 {record.file}")
    table.add_column("measure")
    table.add_column("value", justify="right")
    table.add_row("tokens", str(record.tokens))
    for kind, count in record.axioms.items():
        table.add_row(kind, str(count))
    if record.engine is not None:
        table.add_row(f"objects ({record.engine})", str(record.objects))
        table.add_row(f"arrows ({record.engine})", str(record.arrows))
    if record.bound is not None:
        table.add_row("object bound", str(record.bound))
        table.add_row("bound ratio", f"{record.bound_ratio:.3e}")
    console.print(table)


# ─── Commands ──────────────────────────────────────────────────────────────────
@app.command()
def check(
    files: list[Path] = typer.Argument(..., help="Ontology files to check"),
    engine: Engine = typer.Option(Engine.SH_CAT, "--engine", "-e", help="Reasoning engine"),
    oracle: Engine | None = typer.Option(None, "--oracle", help="Second engine to cross-check the verdict"),
    output: OutputFormat = typer.Option(OutputFormat.TEXT, "--format", "-f", help="Report format"),
    budget_steps: int | None = typer.Option(None, "--budget-steps", help="Arrow insertion budget of a saturation"),
    budget_nodes: int | None = typer.Option(None, "--budget-nodes", help="Node budget of a tableau"),
    unsat_query: str | None = typer.Option(None, "--unsat-query", "-q", help="Concept to test for unsatisfiability"),
    seed: int | None = typer.Option(None, "--seed", help="Shuffle the rule schedule with this seed"),
    jobs: int | None = typer.Option(None, "--jobs", "-j", min=1, help="Worker processes for several files"),
    no_forall_exists: bool = typer.Option(False, "--no-forall-exists", help="Disable the tableau ∀/∃ rules"),
    no_distribution: bool = typer.Option(False, "--no-distribution", help="Disable SH distribution"),
) -> None:
    """Decide consistency of each file; exit 0 consistent, 1 inconsistent, 2 error, 3 budget, 4 disagreement."""
    config = build_config(
        engine=engine,
        oracle=oracle,
        budget_steps=budget_steps,
        budget_nodes=budget_nodes,
        unsat_query=unsat_query,
        schedule_seed=seed,
        forall_exists=not no_forall_exists,
        distribution=not no_distribution,
    )
    records = Reasoner(config).check_files(files, jobs=jobs or ReasonerSettings().jobs)
    for record in records:
        print_verdict(record, output)
    raise typer.Exit(code=max(record.exit_code for record in records))


@app.command()
def entail(
    file: Path = typer.Argument(..., help="Ontology file"),
    query: str = typer.Argument(..., help='Inclusion to test, e.g. "A <= (some R B)"'),
    engine: Engine = typer.Option(Engine.EL_ARROW, "--engine", "-e", help="sh-cat, el-arrow or el-tab"),
    oracle: Engine | None = typer.Option(None, "--oracle", help="Second engine to cross-check the answer"),
    output: OutputFormat = typer.Option(OutputFormat.TEXT, "--format", "-f", help="Report format"),
    budget_steps: int | None = typer.Option(None, "--budget-steps", help="Arrow insertion budget of a saturation"),
    budget_nodes: int | None = typer.Option(None, "--budget-nodes", help="Node budget of a tableau"),
) -> None:
    """Check an entailment; exit 0 entailed, 1 not entailed, 2 error, 3 budget, 4 disagreement."""
    config = build_config(engine=engine, oracle=oracle, budget_steps=budget_steps, budget_nodes=budget_nodes)
    try:
        record = Reasoner(config).entail(file, query)
    except BudgetExceededError as e:
        raise fail(str(e), ExitCode.BUDGET) from e
    except (OSError, CatdlError) as e:
        raise fail(str(e), ExitCode.USAGE) from e
    print_entailment(record, output)
    raise typer.Exit(code=record.exit_code)


@app.command()
def dump(
    file: Path = typer.Argument(..., help="Ontology file"),
    engine: Engine = typer.Option(Engine.SH_CAT, "--engine", "-e", help="Reasoning engine"),
    out: Path | None = typer.Option(None, "--out", "-o", help="Directory for arrows.jsonl, trace.jsonl, model.json"),
    budget_steps: int | None = typer.Option(None, "--budget-steps", help="Arrow insertion budget of a saturation"),
    budget_nodes: int | None = typer.Option(None, "--budget-nodes", help="Node budget of a tableau"),
    seed: int | None = typer.Option(None, "--seed", help="Shuffle the rule schedule with this seed"),
) -> None:
    """Dump the saturated arrows and the trace, or the model of a tableau run."""
    config = build_config(engine=engine, budget_steps=budget_steps, budget_nodes=budget_nodes, schedule_seed=seed)
    try:
        bundle = Reasoner(config).dump(file)
    except BudgetExceededError as e:
        raise fail(str(e), ExitCode.BUDGET) from e
    except (OSError, CatdlError) as e:
        raise fail(str(e), ExitCode.USAGE) from e
    if out is None:
        for arrow in bundle.arrows:
            typer.echo(arrow.to_json())
        if bundle.model is not None:
            typer.echo(bundle.model.to_json())
        return
    for path in bundle.write(out):
        console.print(f"💾 Saved: {path}", style="green")


@app.command()
def gen(
    seed: int = typer.Option(0, "--seed", "-s", help="Generator seed"),
    profile: Profile = typer.Option(Profile.SH, "--profile", "-p", help="Language profile"),
    concepts: int = typer.Option(4, "--concepts", help="Number of concept names"),
    roles: int = typer.Option(2, "--roles", help="Number of role names"),
    individuals: int = typer.Option(2, "--individuals", help="Number of individuals"),
    axioms: int = typer.Option(6, "--axioms", help="Number of axioms"),
    depth: int = typer.Option(2, "--depth", help="Largest concept nesting depth"),
    out: Path | None = typer.Option(None, "--out", "-o", help="File to write instead of stdout"),
) -> None:
    """Write a seeded random ontology in the text format."""
    try:
        cfg = GenConfig(seed, concepts, roles, individuals, axioms, depth, profile=profile)
    except ValueError as e:
        raise fail(str(e), ExitCode.USAGE) from e
    text = print_ontology(generate(cfg))
    if out is None:
        typer.echo(text, nl=False)
        return
    out.write_text(text, encoding="utf-8")
    console.print(f"💾 Saved: {out}", style="green")


@app.command()
def stats(
    file: Path = typer.Argument(..., help="Ontology file"),
    after_saturation: Engine | None = typer.Option(
        None, "--after-saturation", help="Also saturate with sh-cat or el-arrow and report sizes"
    ),
    output: OutputFormat = typer.Option(OutputFormat.TEXT, "--format", "-f", help="Report format"),
    budget_steps: int | None = typer.Option(None, "--budget-steps", help="Arrow insertion budget of a saturation"),
) -> None:
    """Report the token count, the axioms by kind and, optionally, saturated sizes against the EL→ bound."""
    config = build_config(budget_steps=budget_steps)
    try:
        record = Reasoner(config).stats(file, after_saturation)
    except BudgetExceededError as e:
        raise fail(str(e), ExitCode.BUDGET) from e
    except (OSError, CatdlError) as e:
        raise fail(str(e), ExitCode.USAGE) from e
    print_stats(record, output)


@app.command()
def explain(
    file: Path = typer.Argument(..., help="Ontology file"),
    arrow: str = typer.Option(..., "--arrow", "-a", help='Concept arrow to explain, e.g. "{a} <= Bot"'),
    engine: Engine = typer.Option(Engine.SH_CAT, "--engine", "-e", help="sh-cat or el-arrow"),
    budget_steps: int | None = typer.Option(None, "--budget-steps", help="Arrow insertion budget of a saturation"),
) -> None:
    """Print how a stored arrow was derived; exit 1 when the saturated store lacks it."""
    config = build_config(engine=engine, budget_steps=budget_steps)
    try:
        lines = Reasoner(config).explain(file, arrow)
    except BudgetExceededError as e:
        raise fail(str(e), ExitCode.BUDGET) from e
    except (OSError, CatdlError) as e:
        raise fail(str(e), ExitCode.USAGE) from e
    if lines is None:
        console.print(f"➖ {arrow} is not derived ({engine.value})", style="bold yellow")
        raise typer.Exit(code=1)
    logger.debug("derivation of {} has {} lines", arrow, len(lines))
    for line in lines:
        console.print(line, markup=False)
