"""The relational model.

A Morphism is a relation between two finite webs. Generators and the
exponential functor come from the weighted layer run over the boolean
semiring; promotion and the antiderivative also have direct closed forms
here, which the tests cross-check against the compositional versions.
"""

import logging
from collections.abc import Iterable
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Optional

from .algebra import Multiset, SemiringMode, canonical_key, multiset_sum
from .config import Valuation
from .errors import SymmetryViolation, WebMismatch
from .interpret import interpret_derivation
from .logic import Derivation
from .webs import ExclWeb, Point, ProdWeb, Web, excl, pair_web
from .wrel import (
    WMorphism,
    coderc,
    derc,
    excl_row,
    identity,
    w_generator,
)

logger = logging.getLogger(__name__)

BOOL = SemiringMode.BOOL


@dataclass(frozen=True)
class Morphism:
    """Relation from ``source`` to ``target``."""

    source: Web
    target: Web
    graph: frozenset[tuple[Point, Point]]

    def __post_init__(self) -> None:
        for a, b in self.graph:
            if a not in self.source or b not in self.target:
                raise WebMismatch(f"pair {(a, b)!r} lies outside the webs of the relation")

    @classmethod
    def of(cls, source: Web, target: Web, pairs: Iterable[tuple[Point, Point]]) -> "Morphism":
        return cls(source, target, frozenset(pairs))

    @classmethod
    def from_w(cls, m: WMorphism) -> "Morphism":
        return cls(m.source, m.target, frozenset(m.entries))

    def to_w(self) -> WMorphism:
        return WMorphism(self.source, self.target, ((k, 1) for k in self.graph), BOOL)

    def __contains__(self, pair: tuple[Point, Point]) -> bool:
        return pair in self.graph

    def __len__(self) -> int:
        return len(self.graph)

    def __matmul__(self, other: "Morphism") -> "Morphism":
        return rel_compose(self, other)

    def __or__(self, other: "Morphism") -> "Morphism":
        if (self.source, self.target) != (other.source, other.target):
            raise WebMismatch("union of relations between different webs")
        return Morphism(self.source, self.target, self.graph | other.graph)

    def sorted_pairs(self) -> list[tuple[Point, Point]]:
        return sorted(self.graph, key=canonical_key)

    def restrict(self, source: Optional[Web] = None, target: Optional[Web] = None) -> "Morphism":
        source = source or self.source
        target = target or self.target
        return Morphism(source, target, frozenset(
            (a, b) for a, b in self.graph if a in source and b in target
        ))


def rel_generator(kind: str, x: Web, bound: int, y: Optional[Web] = None) -> Morphism:
    """der, coder, weak, coweak, contr, cocontr, digg, derc, coderc, seely2,
    seely0, mu, mix0 or mix2 as a relation."""
    return Morphism.from_w(w_generator(kind, x, bound, y, BOOL))


def rel_identity(x: Web) -> Morphism:
    return Morphism.from_w(identity(x, BOOL))


def rel_excl(r: Morphism, bound: int) -> Morphism:
    """!R = {([a_1..a_n], [b_1..b_n]) | (a_i, b_i) ∈ R}"""
    rows: dict[Point, dict[Point, int]] = {}
    for a, b in r.graph:
        rows.setdefault(a, {})[b] = 1
    source = excl(r.source, bound)
    pairs = (
        (m, q)
        for m in source.points
        for q in excl_row(lambda a: rows.get(a, {}), m)
    )
    return Morphism.of(source, excl(r.target, bound), pairs)


def rel_promotion(f: Morphism, bound: int) -> Morphism:
    """Prom f for f : !A_1 × ... × !A_n → B.

    ((Σ_j m_1^j, ..., Σ_j m_n^j), [b_1, ..., b_k]) for every choice of k ≤ bound
    pairs ((m_1^j, ..., m_n^j), b_j) of f.
    """
    src = f.source
    if not isinstance(src, ProdWeb) or not all(isinstance(w, ExclWeb) for w in src.parts):
        raise WebMismatch("promotion needs a product of exponentials as source")
    width = len(src.parts)
    entries = f.sorted_pairs()
    pairs: set[tuple[Point, Point]] = set()
    for k in range(bound + 1):
        for chosen in combinations_with_replacement(entries, k):
            sums = tuple(
                multiset_sum(u[i] for u, _ in chosen) for i in range(width)
            )
            if sums in src:
                pairs.add((sums, Multiset(b for _, b in chosen)))
    return Morphism.of(src, excl(f.target, bound), pairs)


def rel_compose(g: Morphism, f: Morphism) -> Morphism:
    """g ∘ f = {(a, c) | ∃b (a, b) ∈ f, (b, c) ∈ g}"""
    if f.target != g.source:
        raise WebMismatch("cannot compose: target of f is not the source of g")
    by_source: dict[Point, list[Point]] = {}
    for b, c in g.graph:
        by_source.setdefault(b, []).append(c)
    return Morphism.of(f.source, g.target, (
        (a, c) for a, b in f.graph for c in by_source.get(b, ())
    ))


def rel_tensor(f: Morphism, g: Morphism) -> Morphism:
    return Morphism.of(
        pair_web(f.source, g.source),
        pair_web(f.target, g.target),
        (((a, c), (b, d)) for a, b in f.graph for c, d in g.graph),
    )


def rel_dual(f: Morphism) -> Morphism:
    """Transpose; webs of A and A⊥ coincide."""
    return Morphism.of(f.target, f.source, ((b, a) for a, b in f.graph))


def rel_permute(f: Morphism, perm: tuple[int, ...]) -> Morphism:
    """Coordinate i of the new target is coordinate ``perm[i]`` of the old one."""
    if not isinstance(f.target, ProdWeb) or sorted(perm) != list(range(len(f.target.parts))):
        raise WebMismatch(f"{perm} does not permute the target coordinates")
    target = ProdWeb(tuple(f.target.parts[i] for i in perm))
    return Morphism.of(f.source, target, (
        (a, tuple(b[i] for i in perm)) for a, b in f.graph
    ))


COMBINATORS = {
    "compose": rel_compose,
    "tensor": rel_tensor,
    "dual": rel_dual,
    "permute": rel_permute,
}


def rel_combinator(op: str, *args) -> Morphism:
    if op not in COMBINATORS:
        raise ValueError(f"unknown combinator {op!r}")
    return COMBINATORS[op](*args)


def interpret_derivation_rel(
    d: Derivation,
    valuation: Valuation,
    bound: int,
    headroom: int = 2,
    max_headroom: int = 8,
) -> set[tuple[Point, ...]]:
    """Set of flat tuples over the webs of the conclusions of d."""
    return set(interpret_derivation(d, valuation, bound, BOOL, headroom, max_headroom))


def rel_derc(x: Web, bound: int) -> Morphism:
    return Morphism.from_w(derc(x, bound, BOOL))


def rel_coderc(x: Web, bound: int) -> Morphism:
    return Morphism.from_w(coderc(x, bound, BOOL))


def rel_J(x: Web, bound: int) -> Morphism:
    """Id ∪ ∂̄ ∘ ∂, which is the identity."""
    return rel_identity(excl(x, bound)) | rel_compose(rel_coderc(x, bound), rel_derc(x, bound))


def _split_source(f: Morphism) -> tuple[ExclWeb, Web]:
    src = f.source
    if not (isinstance(src, ProdWeb) and len(src.parts) == 2 and isinstance(src.parts[0], ExclWeb)):
        raise WebMismatch("expected a relation from !X × X")
    return src.parts[0], src.parts[1]


def check_symmetric_rel(f: Morphism) -> None:
    """((m + [a], a'), b) ∈ f iff ((m + [a'], a), b) ∈ f."""
    for (n, a2), b in f.sorted_pairs():
        for a in n.support():
            m = n - Multiset([a])
            if ((m + Multiset([a2]), a), b) not in f.graph:
                raise SymmetryViolation((m, a, a2, b))


def antiderivative_rel(f: Morphism) -> Morphism:
    """g = {(m + [a], b) | ((m, a), b) ∈ f} on !X truncated one level higher."""
    ex, x = _split_source(f)
    check_symmetric_rel(f)
    g = Morphism.of(excl(x, ex.bound + 1), f.target, (
        (m + Multiset([a]), b) for (m, a), b in f.graph
    ))
    logger.debug("relational antiderivative with %d pairs", len(g))
    return g
