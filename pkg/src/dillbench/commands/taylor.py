"""Taylor command."""

import typer

from ..parser import parse_dterm, print_rcomb
from ..resource import normalize_resource, taylor_expand
from . import fail, input_option, read_input


def taylor_cmd(
    input_path: str = input_option(),
    multiplicity: int = typer.Option(2, "--multiplicity", "-p", min=0, help="Largest bunch size of an argument"),
    normalize: bool = typer.Option(False, "--normalize", help="Also normalize the expansion"),
    fuel: int = typer.Option(10000, "--fuel", "-f", help="Fuel of the normalization"),
) -> None:
    """Taylor-expand a differential λ-term into resource terms."""
    try:
        expansion = taylor_expand(parse_dterm(read_input(input_path)), multiplicity)
        if normalize:
            expansion = normalize_resource(expansion, fuel)
        typer.echo(print_rcomb(expansion))

    except typer.Exit:
        raise
    except Exception as e:
        raise fail(e)
