"""Antiderive command."""

import json
import random

import typer

from ..laws import MODEL_MODES, sample_web, symmetric_sample
from ..parser import parse_rterm, print_rcomb
from ..rel import Morphism, antiderivative_rel
from ..resource import antiderivative_check, symmetrize
from ..wrel import poincare_antiderivative
from . import fail, input_option, read_input


def antiderive_cmd(
    input_path: str = input_option(),
    model: str = typer.Option("resource", "--model", "-m", help="resource, rel or wrel"),
    var: str = typer.Option("x", "--var", help="Variable to integrate along"),
    direction: str = typer.Option("h", "--direction", help="Linear direction variable of the input"),
    make_symmetric: bool = typer.Option(False, "--symmetrize", help="Symmetrize the input first"),
    web: int = typer.Option(1, "--web", help="Web size of the random sample (rel, wrel)"),
    degree: int = typer.Option(2, "--degree", "-d", help="Bound of the random sample (rel, wrel)"),
    seed: int = typer.Option(0, "--seed", help="Seed of the random sample (rel, wrel)"),
) -> None:
    """Antiderivative of a resource term, or of a random symmetric matrix.

    For ``resource`` the input is a combination linear in the direction
    variable. For ``rel`` and ``wrel`` a symmetric f : !X ⊗ X → Y is drawn
    from the seed and both f and its antiderivative g are printed as JSON.
    """
    try:
        match model:
            case "resource":
                u = parse_rterm(read_input(input_path))
                if make_symmetric:
                    u = symmetrize(u, var, direction)
                typer.echo(print_rcomb(antiderivative_check(u, var, direction)))
            case "rel" | "wrel":
                x, y = sample_web(web), sample_web(1, "b")
                rng = random.Random(seed)
                if model == "rel":
                    f = Morphism.from_w(symmetric_sample(x, y, degree, MODEL_MODES["rel"], rng))
                    g = antiderivative_rel(f).to_w()
                    f = f.to_w()
                else:
                    f = symmetric_sample(x, y, degree, MODEL_MODES["wrel"], rng)
                    g = poincare_antiderivative(f)
                typer.echo(json.dumps({"seed": seed, "f": f.dump(), "g": g.dump()}, sort_keys=True))
            case _:
                raise typer.BadParameter(f"unknown model {model!r}", param_hint="--model")

    except typer.Exit:
        raise
    except typer.BadParameter:
        raise
    except Exception as e:
        raise fail(e)
