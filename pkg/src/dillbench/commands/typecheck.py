"""Typecheck command."""

from typing import Optional

import typer

from ..parser import parse_net, print_context, print_net
from ..typecheck import typecheck_net
from . import context_option, fail, input_option, read_input, read_sequent, types_option


def typecheck_cmd(
    input_path: str = input_option(),
    types: str = types_option(),
    context: Optional[str] = context_option(),
    strict: bool = typer.Option(False, "--strict", help="Every free variable must be in the context"),
) -> None:
    """Check a net against its conclusions and print the annotated net and context."""
    try:
        gamma, phi = read_sequent(types, context)
        net = parse_net(read_input(input_path), len(gamma))
        typing = typecheck_net(phi, net, gamma, strict)
        typer.echo(print_net(typing.net))
        typer.echo(print_context(typing.context))

    except typer.Exit:
        raise
    except Exception as e:
        raise fail(e)
