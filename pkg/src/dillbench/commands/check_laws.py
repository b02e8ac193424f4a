"""Check-laws command."""

from pathlib import Path
from typing import Optional

import typer
from rich.markup import escape
from rich.table import Table

from ..laws import SUITES, LawResult, run_suite
from ..report import render_laws
from . import console, fail, output


def check_laws_cmd(
    suites: list[str] = typer.Option(["all"], "--suite", "-s", help=f"Law suite: {', '.join(SUITES)} or all"),
    web: int = typer.Option(1, "--web", help="Size of the atom web"),
    degree: int = typer.Option(3, "--degree", "-d", min=0, help="Bound on multiset sizes"),
    model: str = typer.Option("both", "--model", "-m", help="rel, wrel or both"),
    seed: int = typer.Option(0, "--seed", help="Seed of the random samples"),
    samples: int = typer.Option(3, "--samples", help="Random samples per randomized law"),
    report: Optional[str] = typer.Option(None, "--report", metavar="PATH", help="Write a plain-text report"),
) -> None:
    """Check the laws of a suite entrywise on a truncated web."""
    try:
        if model not in ("rel", "wrel", "both"):
            raise typer.BadParameter(f"unknown model {model!r}", param_hint="--model")
        names = list(SUITES) if "all" in suites else suites

        results: list[LawResult] = []
        for name in names:
            if "all" in suites and model != "both" and model not in SUITES[name][0]:
                continue
            results += run_suite(name, web, degree, model, seed, samples)

        table = Table(title=f"Laws (web {web}, D = {degree}, seed {seed})")
        table.add_column("Suite", style="cyan")
        table.add_column("Law", style="white")
        table.add_column("Model", style="white")
        table.add_column("Status", style="white")
        for r in results:
            status = "[green]ok[/green]" if r.ok else "[red]FAIL[/red]"
            table.add_row(r.suite, escape(r.law), r.model, status)
        output.print(table)

        if report:
            Path(report).expanduser().write_text(render_laws(results, web, degree, seed, samples))

        failed = [r for r in results if not r.ok]
        if failed:
            for r in failed:
                console.print(f"{r.suite}/{r.law} [{r.model}]: {r.counterexample}", markup=False)
            raise typer.Exit(1)

    except typer.Exit:
        raise
    except typer.BadParameter:
        raise
    except Exception as e:
        raise fail(e)
