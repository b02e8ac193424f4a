"""Finite webs: the objects of both semantic models.

Points are plain values: an atom point is a string, the unit point is the
empty tuple, a product point is a tuple with one entry per factor, a point of
a with is ``("inl", a)`` or ``("inr", b)`` and a point of an exponential is a
Multiset. Exponentials are truncated to multisets of size at most ``bound``.
"""

from collections.abc import Iterator
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Any

from .algebra import Multiset, canonical_key, multisets_up_to
from .config import Valuation
from .typecheck import Atom, CoAtom, Excl, LType, ParType, Quest, TensType

Point = Any
STAR: Point = ()


class Web:
    @cached_property
    def points(self) -> tuple[Point, ...]:
        return tuple(sorted(self._enumerate(), key=canonical_key))

    def _enumerate(self) -> Iterator[Point]:
        raise NotImplementedError

    def __contains__(self, point: Point) -> bool:
        raise NotImplementedError

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class AtomWeb(Web):
    name: str
    symbols: tuple[str, ...]

    def _enumerate(self) -> Iterator[Point]:
        return iter(self.symbols)

    def __contains__(self, point: Point) -> bool:
        return point in self.symbols


@dataclass(frozen=True)
class UnitWeb(Web):
    def _enumerate(self) -> Iterator[Point]:
        yield STAR

    def __contains__(self, point: Point) -> bool:
        return point == STAR


@dataclass(frozen=True)
class ProdWeb(Web):
    """Flat product; a sequent of n types is a product of n webs."""

    parts: tuple[Web, ...]

    def _enumerate(self) -> Iterator[Point]:
        return product(*(w.points for w in self.parts))

    def __contains__(self, point: Point) -> bool:
        return (
            isinstance(point, tuple)
            and len(point) == len(self.parts)
            and all(p in w for p, w in zip(point, self.parts))
        )


@dataclass(frozen=True)
class WithWeb(Web):
    """Tagged union."""

    left: Web
    right: Web

    def _enumerate(self) -> Iterator[Point]:
        for a in self.left.points:
            yield ("inl", a)
        for b in self.right.points:
            yield ("inr", b)

    def __contains__(self, point: Point) -> bool:
        match point:
            case ("inl", a):
                return a in self.left
            case ("inr", b):
                return b in self.right
        return False


@dataclass(frozen=True)
class ExclWeb(Web):
    base: Web
    bound: int

    def _enumerate(self) -> Iterator[Point]:
        return iter(multisets_up_to(self.base.points, self.bound))

    def __contains__(self, point: Point) -> bool:
        return (
            isinstance(point, Multiset)
            and len(point) <= self.bound
            and all(a in self.base for a in point.support())
        )


EMPTY_WEB = AtomWeb("0", ())


def pair_web(x: Web, y: Web) -> ProdWeb:
    return ProdWeb((x, y))


def excl(x: Web, bound: int) -> ExclWeb:
    return ExclWeb(x, bound)


def denote_type(a: LType, v: Valuation, bound: int) -> Web:
    """Web of a type; a type and its dual have the same web."""
    match a:
        case Atom(name) | CoAtom(name):
            return AtomWeb(name, v.web(name))
        case TensType(l, r) | ParType(l, r):
            return pair_web(denote_type(l, v, bound), denote_type(r, v, bound))
        case Excl(b) | Quest(b):
            return excl(denote_type(b, v, bound), bound)
    raise TypeError(f"cannot interpret {a}")


def denote_sequent(types: tuple[LType, ...], v: Valuation, bound: int) -> ProdWeb:
    return ProdWeb(tuple(denote_type(a, v, bound) for a in types))


def with_bound(w: Web, bound: int) -> Web:
    """The same web with every exponential layer truncated at ``bound``."""
    match w:
        case ProdWeb(parts):
            return ProdWeb(tuple(with_bound(p, bound) for p in parts))
        case WithWeb(l, r):
            return WithWeb(with_bound(l, bound), with_bound(r, bound))
        case ExclWeb(base, _):
            return ExclWeb(with_bound(base, bound), bound)
    return w


def point_degree(point: Point) -> int:
    """Largest multiset size anywhere in the point."""
    if isinstance(point, Multiset):
        return max([len(point), *(point_degree(e) for e in point.support())])
    if isinstance(point, tuple):
        return max((point_degree(e) for e in point if not isinstance(e, str)), default=0)
    return 0


def encode_point(point: Point) -> Any:
    """JSON form: strings stay, tuples become lists, multisets become {"ms": [...]}."""
    if isinstance(point, Multiset):
        return {"ms": [encode_point(e) for e in point]}
    if isinstance(point, tuple):
        return [encode_point(e) for e in point]
    return point
