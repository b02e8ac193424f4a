"""Eval command."""

from typing import Optional

import typer

from ..config import Valuation, load_config
from ..interpret import interpret_net
from ..parser import parse_net
from ..typecheck import atoms
from . import config_option, console, context_option, fail, input_option, read_input, read_sequent, types_option


def eval_cmd(
    input_path: str = input_option(),
    types: str = types_option(),
    context: Optional[str] = context_option(),
    model: str = typer.Option("rel", "--model", "-m", help="rel or wrel"),
    valuation: Optional[str] = typer.Option(
        None, "--valuation", metavar="PATH", help='Atom webs as JSON, {"atoms": {"a": ["p", "q"]}}'
    ),
    degree: Optional[int] = typer.Option(None, "--degree", "-d", help="Bound on multiset sizes"),
    config_path: Optional[str] = config_option(),
) -> None:
    """Interpret a net in the relational or the weighted model and print it as JSON."""
    try:
        if model not in ("rel", "wrel"):
            raise typer.BadParameter(f"unknown model {model!r}", param_hint="--model")
        config = load_config(config_path, valuation=valuation, degree=degree)
        gamma, phi = read_sequent(types, context)
        net = parse_net(read_input(input_path), len(gamma))

        if config.valuation is not None:
            v = config.load_valuation()
        else:
            names = set().union(*(atoms(a) for a in gamma), *(atoms(a) for a in (phi or {}).values()))
            v = Valuation.uniform(sorted(names), 2)
            console.print("[yellow]No valuation given; every atom gets the web p0, p1[/yellow]")

        result = interpret_net(
            model, net, gamma, phi, v, config.degree,
            budget=config.budget, headroom=config.headroom, max_headroom=config.max_headroom,
        )
        typer.echo(result.to_json())

    except typer.Exit:
        raise
    except typer.BadParameter:
        raise
    except Exception as e:
        raise fail(e)
