"""Check-invariance command."""

from pathlib import Path
from typing import Optional

import typer
from rich.markup import escape
from rich.table import Table

from ..config import Valuation, load_config
from ..corpus import generate_corpus, load_corpus
from ..invariance import MODELS, InvarianceCase, check_invariance
from ..report import render_invariance
from . import config_option, console, fail, output


def check_invariance_cmd(
    corpus_path: Optional[str] = typer.Argument(None, metavar="CORPUS", help="Corpus YAML, the bundled one if omitted"),
    generated: int = typer.Option(0, "--generated", "-g", help="Also check this many random derivable nets"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed of the generated nets and of the random strategy"),
    degree: Optional[int] = typer.Option(None, "--degree", "-d", help="Bound on multiset sizes"),
    model: str = typer.Option("both", "--model", "-m", help="rel, wrel or both"),
    each_step: bool = typer.Option(False, "--each-step", help="Compare after every step, not only the normal form"),
    chain_rule: bool = typer.Option(False, "--chain-rule", help="Generated boxes prefer codereliction arguments"),
    box_box: bool = typer.Option(False, "--box-box", help="Generated boxes prefer box arguments"),
    report: Optional[str] = typer.Option(None, "--report", metavar="PATH", help="Write a plain-text report"),
    config_path: Optional[str] = config_option(),
) -> None:
    """Reduce every corpus net and compare the interpretations of source and normal form."""
    try:
        if model not in ("rel", "wrel", "both"):
            raise typer.BadParameter(f"unknown model {model!r}", param_hint="--model")
        models = MODELS if model == "both" else (model,)
        config = load_config(config_path, degree=degree, seed=seed)

        cases: list[InvarianceCase] = []
        for entry in load_corpus(corpus_path):
            net, types, context = entry.parsed()
            cases += check_invariance(entry.name, net, types, context, entry.valuation(), config, models, each_step)
        if generated:
            uniform = Valuation.uniform(["a", "b"], 2)
            for g in generate_corpus(generated, config.seed or 0, chain_rule=chain_rule, box_box=box_box):
                cases += check_invariance(g.name, g.net, g.types, g.context, uniform, config, models, each_step)

        table = Table(title=f"Semantic invariance (D = {config.degree})")
        table.add_column("Net", style="cyan")
        table.add_column("Model", style="white")
        table.add_column("Steps", justify="right")
        table.add_column("Status", style="white")
        for case in cases:
            status = "[green]ok[/green]" if case.ok else f"[red]FAIL[/red] {escape(case.detail)}"
            table.add_row(escape(case.name), case.model, str(case.steps), status)
        output.print(table)

        if report:
            Path(report).expanduser().write_text(render_invariance(config, cases, corpus_path))

        failed = [c for c in cases if not c.ok]
        if failed:
            for c in failed:
                console.print(f"{c.name} [{c.model}]: {c.detail}", markup=False)
            checks = [c for c in failed if c.exit_code == 1]
            raise typer.Exit(1 if checks else max(c.exit_code for c in failed))

    except typer.Exit:
        raise
    except typer.BadParameter:
        raise
    except Exception as e:
        raise fail(e)
