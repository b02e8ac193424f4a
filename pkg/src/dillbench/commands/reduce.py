"""Reduce command."""

from typing import Optional

import typer

from ..config import load_config
from ..errors import FuelExhausted
from ..parser import parse_net, print_net
from ..report import render_trace
from ..rewrite import RuleId, Strategy, trace
from . import config_option, fail, input_option, read_input


def reduce_cmd(
    input_path: str = input_option(),
    show_trace: bool = typer.Option(False, "--trace", help="Print every step before the normal form"),
    fuel: Optional[int] = typer.Option(None, "--fuel", "-f", help="Maximum number of steps"),
    strategy: Optional[str] = typer.Option(
        None, "--strategy", "-s", help="leftmost-innermost, random or single"
    ),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed of the random strategy"),
    rules: Optional[list[str]] = typer.Option(None, "--rule", "-r", help="Rule fired by the single strategy"),
    inside_boxes: Optional[bool] = typer.Option(
        None, "--inside-boxes/--outside-boxes", help="Also reduce inside box contents"
    ),
    width: int = typer.Option(0, "--width", "-w", help="Width of a bare 0"),
    config_path: Optional[str] = config_option(),
) -> None:
    """Normalize a net by cut elimination."""
    try:
        config = load_config(
            config_path,
            fuel=fuel,
            strategy=strategy,
            seed=seed,
            rules=rules or None,
            reduce_inside_boxes=inside_boxes,
        )
        net = parse_net(read_input(input_path), width or None, config.mode)
        chosen = Strategy(
            config.strategy,
            config.seed,
            frozenset(RuleId(r) for r in config.rules),
            config.reduce_inside_boxes,
        )
        normal, lines = trace(net, config.fuel, chosen)
        if show_trace:
            typer.echo(render_trace(config, print_net(net), print_net(normal), lines), nl=False)
        else:
            typer.echo(print_net(normal))

    except typer.Exit:
        raise
    except FuelExhausted as e:
        typer.echo(print_net(e.partial))
        raise fail(e)
    except Exception as e:
        raise fail(e)
