"""Template rendering for traces and check reports."""

from pathlib import Path
from typing import Optional

from jinja2 import Environment, FileSystemLoader

from .config import RunConfig
from .invariance import InvarianceCase
from .laws import LawResult


def _get_template_env() -> Environment:
    """Get Jinja2 environment with templates directory."""
    templates_dir = Path(__file__).parent / "templates"
    return Environment(
        loader=FileSystemLoader(templates_dir),
        trim_blocks=True,
        lstrip_blocks=True,
    )


def render_trace(config: RunConfig, source: str, normal_form: str, lines: list[str]) -> str:
    """Render a reduction trace with its reproducibility header.

    Args:
        config: Settings the reduction ran with
        source: Printed input net
        normal_form: Printed normal form
        lines: Trace lines, one per step

    Returns:
        Rendered trace
    """
    env = _get_template_env()
    template = env.get_template("trace.txt.j2")

    return template.render(
        config=config,
        source=source,
        normal_form=normal_form,
        lines=lines,
    )


def render_invariance(config: RunConfig, cases: list[InvarianceCase], source: Optional[str] = None) -> str:
    """Render the plain-text report of check-invariance.

    Args:
        config: Settings the check ran with
        cases: One case per net and model
        source: Corpus file, None for the bundled corpus

    Returns:
        Rendered report
    """
    env = _get_template_env()
    template = env.get_template("invariance.txt.j2")

    return template.render(
        config=config,
        cases=cases,
        source=source or "bundled corpus",
        failed=sum(1 for c in cases if not c.ok),
    )


def render_laws(results: list[LawResult], web: int, degree: int, seed: int, samples: int) -> str:
    """Render the plain-text report of check-laws."""
    env = _get_template_env()
    template = env.get_template("laws.txt.j2")

    return template.render(
        results=results,
        web=web,
        degree=degree,
        seed=seed,
        samples=samples,
        failed=sum(1 for r in results if not r.ok),
    )
