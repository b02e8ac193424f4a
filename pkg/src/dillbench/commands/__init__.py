"""CLI commands for dill."""

import sys
from pathlib import Path
from typing import Optional

import typer
from rich.console import Console
from rich.markup import escape

from ..errors import DillError
from ..parser import parse_context, parse_types
from ..syntax import Var
from ..typecheck import LType

console = Console(stderr=True)
output = Console(highlight=False)


def config_option() -> Optional[str]:
    """Common config path option."""
    return typer.Option(
        None,
        "--config",
        "-c",
        metavar="PATH",
        help="Path to a YAML run configuration",
    )


def input_option() -> str:
    return typer.Option(
        "-",
        "--in",
        "-i",
        metavar="PATH",
        help="Input file, - for stdin",
    )


def types_option() -> str:
    return typer.Option(
        "",
        "--types",
        "-t",
        help="Comma separated conclusion types",
    )


def context_option() -> Optional[str]:
    return typer.Option(
        None,
        "--context",
        help='Typing context of free variables as JSON, e.g. {"x": "!a"}',
    )


def read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).expanduser().read_text()


def read_sequent(types: str, context: Optional[str]) -> tuple[tuple[LType, ...], Optional[dict[Var, LType]]]:
    return parse_types(types), parse_context(context) if context else None


def fail(e: Exception) -> typer.Exit:
    """Report e on stderr and build the exit carrying its code."""
    console.print(f"[red]Error:[/red] {escape(str(e))}")
    return typer.Exit(e.exit_code if isinstance(e, DillError) else 2)
