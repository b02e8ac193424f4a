"""Semantic invariance of cut elimination.

A net is reduced with the configured strategy and every net along the way
(or only the normal form) is interpreted in both models; all of them must
have the value of the source.
"""

import logging
import random
from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from typing import Optional

from .config import RunConfig, Valuation
from .errors import DillError, FuelExhausted
from .interpret import Interpretation, interpret_net
from .rewrite import RuleId, Strategy, find_redexes, step
from .syntax import Net, Var
from .typecheck import LType, typecheck_net
from .webs import encode_point

logger = logging.getLogger(__name__)

MODELS = ("rel", "wrel")


@dataclass
class InvarianceCase:
    """Outcome of reducing one net and comparing its values in one model."""

    name: str
    model: str
    steps: int
    ok: bool
    detail: str = ""
    exit_code: int = 0


def strategy_of(config: RunConfig) -> Strategy:
    return Strategy(
        config.strategy,
        config.seed,
        frozenset(RuleId(r) for r in config.rules),
        config.reduce_inside_boxes,
    )


def reduction_sequence(net: Net, fuel: int, strategy: Strategy) -> Iterator[tuple[Optional[RuleId], Net]]:
    """The source, then every net reached, each with the rule that produced it."""
    rng = random.Random(strategy.seed)
    yield None, net
    for _ in range(fuel):
        redexes = find_redexes(net, strategy)
        if not redexes:
            return
        r = strategy.choose(redexes, rng)
        net = step(net, r)
        yield r.rule, net
    if find_redexes(net, strategy):
        raise FuelExhausted(net, fuel)


def _difference(a: Interpretation, b: Interpretation) -> str:
    for t in sorted(set(a.values) | set(b.values), key=lambda t: repr(encode_point(t))):
        if a.values.get(t, 0) != b.values.get(t, 0):
            return f"{encode_point(t)}: {a.values.get(t, 0)} vs {b.values.get(t, 0)}"
    return ""


def check_invariance(
    name: str,
    net: Net,
    types: tuple[LType, ...],
    context: Optional[Mapping[Var, LType]],
    valuation: Valuation,
    config: RunConfig,
    models: tuple[str, ...] = MODELS,
    each_step: bool = False,
) -> list[InvarianceCase]:
    """One case per model: does reduction preserve the value of the net?"""
    try:
        source = typecheck_net(context, net, types).net
        sequence = list(reduction_sequence(source, config.fuel, strategy_of(config)))
    except DillError as e:
        return [InvarianceCase(name, m, 0, False, str(e), e.exit_code) for m in models]

    steps = len(sequence) - 1
    rules = sorted({r for r, _ in sequence if r is not None})
    logger.debug("%s: %d steps using %s", name, steps, ", ".join(rules) or "no rule")
    compared = sequence[1:] if each_step else sequence[-1:]

    def value(model: str, p: Net) -> Interpretation:
        return interpret_net(
            model, p, types, context, valuation, config.degree,
            config.budget, config.headroom, config.max_headroom,
        )

    cases = []
    for m in models:
        try:
            expected = value(m, source)
            case = InvarianceCase(name, m, steps, True)
            for k, (rule, p) in enumerate(compared, start=1 if each_step else steps):
                if k == 0:
                    continue
                diff = _difference(expected, value(m, p))
                if diff:
                    case = InvarianceCase(name, m, steps, False, f"after step {k} ({rule}): {diff}", 1)
                    break
        except DillError as e:
            case = InvarianceCase(name, m, steps, False, str(e), e.exit_code)
        cases.append(case)
    return cases
