"""Derive command."""

from typing import Optional

import typer

from ..config import load_config
from ..errors import NotFound
from ..logic import derivation_to_sexp, derivations, sequentialize
from ..parser import parse_net
from . import config_option, context_option, fail, input_option, read_input, read_sequent, types_option


def derive_cmd(
    input_path: str = input_option(),
    types: str = types_option(),
    context: Optional[str] = context_option(),
    limit: int = typer.Option(1, "--limit", "-n", help="Print up to this many distinct derivations"),
    budget: Optional[int] = typer.Option(None, "--budget", help="Goal budget of the search"),
    config_path: Optional[str] = config_option(),
) -> None:
    """Search for a derivation of the net and print it as an s-expression."""
    try:
        config = load_config(config_path, budget=budget)
        gamma, phi = read_sequent(types, context)
        net = parse_net(read_input(input_path), len(gamma))

        if limit > 1:
            found = derivations(net, gamma, phi, limit, config.budget)
            if not found:
                raise NotFound(f"no derivation of {net}")
        else:
            found = [sequentialize(net, gamma, phi, config.budget)]
        for d in found:
            typer.echo(derivation_to_sexp(d))

    except typer.Exit:
        raise
    except NotFound as e:
        typer.echo("NOT-FOUND")
        raise fail(e)
    except Exception as e:
        raise fail(e)
