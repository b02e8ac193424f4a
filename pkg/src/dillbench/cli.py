"""CLI entry point for dill."""

import logging
from importlib.metadata import PackageNotFoundError, version
from typing import Optional

import typer
from rich.logging import RichHandler

from .commands import console
from .commands.antiderive import antiderive_cmd
from .commands.check_invariance import check_invariance_cmd
from .commands.check_laws import check_laws_cmd
from .commands.derive import derive_cmd
from .commands.eval import eval_cmd
from .commands.parse import parse_cmd
from .commands.reduce import reduce_cmd
from .commands.taylor import taylor_cmd
from .commands.typecheck import typecheck_cmd


def version_callback(value: bool) -> None:
    if value:
        try:
            installed = version("dillbench")
        except PackageNotFoundError:
            from . import __version__ as installed
        print(f"dill {installed}")
        raise typer.Exit()


app = typer.Typer(
    name="dill",
    help="Differential linear logic workbench - reduce, type and interpret proof-nets",
    no_args_is_help=True,
)


@app.callback()
def main(
    version: Optional[bool] = typer.Option(
        None,
        "--version",
        "-v",
        callback=version_callback,
        is_eager=True,
        help="Show version and exit",
    ),
    verbose: bool = typer.Option(False, "--verbose", "-V", help="Log debug messages to stderr"),
) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=console, show_path=False)],
        force=True,
    )

# Register commands
app.command(name="parse")(parse_cmd)
app.command(name="typecheck")(typecheck_cmd)
app.command(name="derive")(derive_cmd)
app.command(name="reduce")(reduce_cmd)
app.command(name="eval")(eval_cmd)
app.command(name="taylor")(taylor_cmd)
app.command(name="antiderive")(antiderive_cmd)
app.command(name="check-invariance")(check_invariance_cmd)
app.command(name="check-laws")(check_laws_cmd)


if __name__ == "__main__":
    app()
