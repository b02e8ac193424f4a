"""Interpretation of derivations and nets in the relational and weighted models.

The value of a derivation of ⊢ Γ is a vector over the flat product of the
webs of Γ: a map from n-tuples of points to scalars. Both models share the
fold; the relational model runs it over the boolean semiring.
"""

import json
import logging
from collections import defaultdict
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Literal, Optional

from .algebra import EMPTY, Multiset, SemiringMode, canonical_key, format_scalar, multiset_binomial
from .config import Valuation
from .errors import NegativeCoefficient, TruncationUnstable
from .logic import (
    Ax,
    Codereliction,
    Cocontraction,
    Contraction,
    Coweakening,
    CutRule,
    Dereliction,
    Derivation,
    Empty,
    Mix,
    ParRule,
    Perm,
    Prom,
    SumRule,
    TensRule,
    Weakening,
    sequentialize,
)
from .syntax import Net, Var
from .typecheck import LType
from .webs import Point, denote_type, encode_point, point_degree
from .wrel import Row, promotion_row

logger = logging.getLogger(__name__)

Model = Literal["rel", "wrel"]
Tuple = tuple[Point, ...]
Values = dict[Tuple, Fraction]

MODES: dict[str, SemiringMode] = {"rel": SemiringMode.BOOL, "wrel": SemiringMode.RAT}


class Interpreter:
    """Folds a derivation into its value at a fixed bound; memo is per instance."""

    def __init__(self, valuation: Valuation, bound: int, mode: SemiringMode = SemiringMode.RAT):
        self.valuation = valuation
        self.bound = bound
        self.mode = mode
        self._memo: dict[int, tuple[Derivation, Values]] = {}

    def __call__(self, d: Derivation) -> Values:
        key = id(d)
        if key not in self._memo:
            self._memo[key] = (d, {t: c for t, c in self._fold(d).items() if c})
        return self._memo[key][1]

    def _fold(self, d: Derivation) -> Values:
        out: Values = defaultdict(Fraction)
        match d:
            case Ax(_, a):
                for p in denote_type(a, self.valuation, self.bound).points:
                    out[(p, p)] = Fraction(1)
            case Perm(perm, premise):
                for t, c in self(premise).items():
                    out[tuple(t[i] for i in perm)] += c
            case CutRule(left, right):
                by_point: dict[Point, list[tuple[Tuple, Fraction]]] = defaultdict(list)
                for t, c in self(right).items():
                    by_point[t[-1]].append((t[:-1], c))
                for s, c in self(left).items():
                    for t, e in by_point.get(s[-1], ()):
                        out[s[:-1] + t] += c * e
            case ParRule(premise):
                for t, c in self(premise).items():
                    out[(*t[:-2], (t[-2], t[-1]))] += c
            case TensRule(left, right):
                for (s, c), (t, e) in product(self(left).items(), self(right).items()):
                    out[(*s[:-1], *t[:-1], (s[-1], t[-1]))] += c * e
            case Mix(left, right):
                for (s, c), (t, e) in product(self(left).items(), self(right).items()):
                    out[s + t] += c * e
            case Empty():
                out[()] = Fraction(1)
            case Weakening(_, premise):
                for t, c in self(premise).items():
                    out[(*t, EMPTY)] += c
            case Coweakening():
                out[(EMPTY,)] = Fraction(1)
            case Dereliction(premise) | Codereliction(premise):
                if self.bound >= 1:
                    for t, c in self(premise).items():
                        out[(*t[:-1], Multiset([t[-1]]))] += c
            case Contraction(premise):
                for t, c in self(premise).items():
                    m = t[-2] + t[-1]
                    if len(m) <= self.bound:
                        out[(*t[:-2], m)] += c
            case Cocontraction(left, right):
                for (s, c), (t, e) in product(self(left).items(), self(right).items()):
                    m = s[-1] + t[-1]
                    if len(m) <= self.bound:
                        out[(*s[:-1], *t[:-1], m)] += c * e * multiset_binomial(m, s[-1])
            case SumRule(_, coeffs, parts):
                for mu, part in zip(coeffs, parts):
                    mu = Fraction(mu)
                    if self.mode is SemiringMode.BOOL:
                        if mu < 0:
                            raise NegativeCoefficient(f"coefficient {format_scalar(mu)} in the relational model")
                        mu = self.mode.coerce(mu)
                    for t, c in self(part).items():
                        out[t] += mu * c
            case Prom(content, args):
                self._promotion(content, args, out)
            case _:
                raise TypeError(f"not a derivation: {d!r}")
        if self.mode is SemiringMode.BOOL:
            return {t: Fraction(1) for t, c in out.items() if c}
        return dict(out)

    def _promotion(self, content: Derivation, args: tuple[Derivation, ...], out: Values) -> None:
        rows: dict[Tuple, Row] = defaultdict(dict)
        for t, c in self(content).items():
            rows[t[:-1]][t[-1]] = c

        def row_of(u: Point) -> Row:
            return rows.get(u, {})

        cache: dict[Tuple, Row] = {}
        arg_values = [list(self(a).items()) for a in args]
        for combo in product(*arg_values):
            ms = tuple(t[-1] for t, _ in combo)
            weight = Fraction(1)
            prefix: Tuple = ()
            for t, c in combo:
                weight *= c
                prefix += t[:-1]
            if ms not in cache:
                cache[ms] = promotion_row(row_of, ms, self.bound)
            for q, v in cache[ms].items():
                out[(*prefix, q)] += weight * v


def _sums_over_points(d: Derivation) -> bool:
    """Cuts and promotions both consume points larger than the ones they yield."""
    stack = [d]
    while stack:
        node = stack.pop()
        if isinstance(node, (CutRule, Prom)):
            return True
        stack.extend(node.premises)
    return False


def _restrict(values: Values, bound: int) -> Values:
    return {t: c for t, c in values.items() if point_degree(t) <= bound}


def interpret_derivation(
    d: Derivation,
    valuation: Valuation,
    bound: int,
    mode: SemiringMode = SemiringMode.RAT,
    headroom: int = 2,
    max_headroom: int = 8,
) -> Values:
    """Value of d restricted to points of degree ≤ bound.

    Cuts and promotions sum over intermediate points, so the value is computed at bound + H
    and H is raised by 2 until two consecutive restrictions agree.
    """
    if not _sums_over_points(d):
        return Interpreter(valuation, bound, mode)(d)
    h = headroom
    previous = _restrict(Interpreter(valuation, bound + h, mode)(d), bound)
    while True:
        h += 2
        if h > max_headroom:
            raise TruncationUnstable(f"value still changing at headroom {h - 2}")
        logger.debug("truncation check at headroom %d", h)
        current = _restrict(Interpreter(valuation, bound + h, mode)(d), bound)
        if current == previous:
            return current
        previous = current


@dataclass
class Interpretation:
    """Value of a net in one model."""

    model: str
    types: tuple[LType, ...]
    values: Values

    def as_set(self) -> set[Tuple]:
        return set(self.values)

    def to_json(self) -> str:
        items = sorted(self.values.items(), key=lambda kv: canonical_key(kv[0]))
        if self.model == "rel":
            payload: list = [encode_point(t) for t, _ in items]
        else:
            payload = [{"point": encode_point(t), "val": format_scalar(c)} for t, c in items]
        return json.dumps(payload, sort_keys=True)


def interpret_net(
    model: Model,
    net: Net,
    gamma: tuple[LType, ...],
    phi: Optional[Mapping[Var, LType]],
    valuation: Valuation,
    bound: int,
    budget: int = 20000,
    headroom: int = 2,
    max_headroom: int = 8,
) -> Interpretation:
    """Sequentialize ``net`` and interpret the derivation found."""
    d = sequentialize(net, gamma, phi, budget)
    values = interpret_derivation(d, valuation, bound, MODES[model], headroom, max_headroom)
    return Interpretation(model, tuple(gamma), values)
