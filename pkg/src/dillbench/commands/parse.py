"""Parse command."""

import typer

from ..parser import parse_dterm, parse_net, parse_rterm, parse_type, print_dcomb, print_net, print_rcomb, print_type
from . import fail, input_option, read_input


def parse_cmd(
    input_path: str = input_option(),
    kind: str = typer.Option("net", "--kind", "-k", help="net, type, dterm or rterm"),
    width: int = typer.Option(0, "--width", "-w", help="Width of a bare 0"),
) -> None:
    """Parse the input and print it in canonical form."""
    try:
        text = read_input(input_path)
        match kind:
            case "net":
                typer.echo(print_net(parse_net(text, width or None)))
            case "type":
                typer.echo(print_type(parse_type(text)))
            case "dterm":
                typer.echo(print_dcomb(parse_dterm(text)))
            case "rterm":
                typer.echo(print_rcomb(parse_rterm(text)))
            case _:
                raise typer.BadParameter(f"unknown kind {kind!r}", param_hint="--kind")

    except typer.Exit:
        raise
    except typer.BadParameter:
        raise
    except Exception as e:
        raise fail(e)
