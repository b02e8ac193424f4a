"""Exact scalars, finite multisets and formal linear combinations.

Scalars are `fractions.Fraction` values interpreted in one of three semirings
(booleans with 1+1=1, naturals, rationals). Multisets and linear combinations
are immutable and keep a canonical order on their elements, so structural
equality is mathematical equality and printing is deterministic.
"""

from collections import Counter
from collections.abc import Callable, Hashable, Iterable, Iterator, Mapping
from enum import Enum
from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import comb, factorial, prod
from typing import Any, Generic, TypeVar

from .errors import MarginalMismatch, ModeViolation, SubsetViolation

T = TypeVar("T", bound=Hashable)

ZERO = Fraction(0)
ONE = Fraction(1)


class SemiringMode(str, Enum):
    """Coefficient semiring of formal sums."""

    BOOL = "bool"
    NAT = "nat"
    RAT = "rat"

    def coerce(self, value: Any) -> Fraction:
        """Map a rational into this semiring, failing loudly on invalid values."""
        q = Fraction(value)
        if q < 0 and self is not SemiringMode.RAT:
            raise ModeViolation(f"negative scalar {q} in {self.value} mode")
        if self is SemiringMode.BOOL:
            return ONE if q else ZERO
        if self is SemiringMode.NAT and q.denominator != 1:
            raise ModeViolation(f"non-integer scalar {q} in nat mode")
        return q

    def add(self, a: Fraction, b: Fraction) -> Fraction:
        s = a + b
        if self is SemiringMode.BOOL and s:
            return ONE
        return s


def canonical_key(obj: Any) -> tuple:
    """Total order on everything that can sit inside a multiset or a sum."""
    if isinstance(obj, bool):
        return (0, int(obj))
    if isinstance(obj, (int, Fraction)):
        return (0, obj)
    if isinstance(obj, str):
        return (1, obj)
    if isinstance(obj, tuple):
        return (2, len(obj), tuple(canonical_key(x) for x in obj))
    if isinstance(obj, Multiset):
        return (3, obj.sort_key())
    key = getattr(obj, "sort_key", None)
    if key is not None:
        return (4, type(obj).__name__, key())
    raise TypeError(f"no canonical order for {type(obj).__name__}")


def format_scalar(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class Multiset(Generic[T]):
    """Finite multiset with canonically ordered entries."""

    __slots__ = ("_entries", "_size", "_key", "_hash")

    def __init__(self, elements: Iterable[T] = ()):
        self._set_counts(Counter(elements))

    @classmethod
    def from_counts(cls, counts: Mapping[T, int]) -> "Multiset[T]":
        m = cls.__new__(cls)
        m._set_counts(counts)
        return m

    def _set_counts(self, counts: Mapping[T, int]) -> None:
        if any(n < 0 for n in counts.values()):
            raise ValueError("negative multiplicity")
        entries = [(e, n) for e, n in counts.items() if n > 0]
        keyed = sorted(((canonical_key(e), e, n) for e, n in entries), key=lambda k: k[0])
        self._entries = tuple((e, n) for _, e, n in keyed)
        self._size = sum(n for _, n in self._entries)
        self._key = (self._size, tuple((k, n) for k, _, n in keyed))
        self._hash = hash(self._entries)

    def sort_key(self) -> tuple:
        return self._key

    def __len__(self) -> int:
        return self._size

    def __iter__(self) -> Iterator[T]:
        for e, n in self._entries:
            for _ in range(n):
                yield e

    def __contains__(self, e: object) -> bool:
        return any(x == e for x, _ in self._entries)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Multiset) and self._entries == other._entries

    def __hash__(self) -> int:
        return self._hash

    def __le__(self, other: "Multiset[T]") -> bool:
        return all(n <= other.count(e) for e, n in self._entries)

    def __add__(self, other: "Multiset[T]") -> "Multiset[T]":
        counts = Counter(dict(self._entries))
        counts.update(dict(other._entries))
        return Multiset.from_counts(counts)

    def __sub__(self, other: "Multiset[T]") -> "Multiset[T]":
        if not other <= self:
            raise SubsetViolation(f"{other} is not below {self}")
        counts = Counter(dict(self._entries))
        counts.subtract(dict(other._entries))
        return Multiset.from_counts(counts)

    def __repr__(self) -> str:
        return f"Multiset({list(self)!r})"

    def __str__(self) -> str:
        return "[" + ", ".join(str(e) for e in self) + "]"

    def count(self, e: T) -> int:
        for x, n in self._entries:
            if x == e:
                return n
        return 0

    def items(self) -> tuple[tuple[T, int], ...]:
        return self._entries

    def support(self) -> tuple[T, ...]:
        return tuple(e for e, _ in self._entries)

    def map(self, f: Callable[[T], Any]) -> "Multiset":
        return Multiset(f(e) for e in self)

    def submultisets(self) -> Iterator["Multiset[T]"]:
        """All p ≤ self, in a deterministic order."""
        support = self.support()
        for counts in product(*(range(n + 1) for _, n in self._entries)):
            yield Multiset.from_counts(dict(zip(support, counts)))

    def splits(self) -> Iterator[tuple["Multiset[T]", "Multiset[T]"]]:
        """All pairs (l, r) with l + r = self."""
        for p in self.submultisets():
            yield p, self - p


EMPTY: Multiset = Multiset()


def multiset_sum(ms: Iterable[Multiset]) -> Multiset:
    counts: Counter = Counter()
    for m in ms:
        counts.update(dict(m.items()))
    return Multiset.from_counts(counts)


def multisets_up_to(elements: Iterable[T], bound: int) -> list[Multiset[T]]:
    """All multisets over `elements` of size at most `bound`, smallest first."""
    elements = list(elements)
    out: list[Multiset[T]] = []
    for k in range(bound + 1):
        out.extend(Multiset(c) for c in combinations_with_replacement(elements, k))
    return out


def multiset_factorial(m: Multiset) -> int:
    return prod(factorial(n) for _, n in m.items())


def multiset_binomial(m: Multiset, p: Multiset) -> Fraction:
    """Binom(m, p) = Π_a m(a)! / (p(a)! (m(a) - p(a))!)."""
    if not p <= m:
        raise SubsetViolation(f"{p} is not below {m}")
    return Fraction(prod(comb(n, p.count(a)) for a, n in m.items()))


def _bounded_compositions(n: int, caps: list[int]) -> Iterator[tuple[int, ...]]:
    if not caps:
        if n == 0:
            yield ()
        return
    for k in range(min(n, caps[0]) + 1):
        for rest in _bounded_compositions(n - k, caps[1:]):
            yield (k, *rest)


def enumerate_L(m: Multiset, p: Multiset) -> set[Multiset]:
    """All multisets of pairs r with row marginal m and column marginal p."""
    if len(m) != len(p):
        return set()
    rows = list(m.items())
    cols = [b for b, _ in p.items()]
    results: set[Multiset] = set()

    def fill(i: int, remaining: list[int], acc: dict) -> None:
        if i == len(rows):
            if not any(remaining):
                results.add(Multiset.from_counts(acc))
            return
        a, n = rows[i]
        for alloc in _bounded_compositions(n, remaining):
            nxt = dict(acc)
            for b, k in zip(cols, alloc):
                if k:
                    nxt[(a, b)] = k
            fill(i + 1, [c - k for c, k in zip(remaining, alloc)], nxt)

    fill(0, [n for _, n in p.items()], {})
    return results


def multiset_multinomial(p: Multiset, r: Multiset) -> Fraction:
    """[p r] = Π_b p(b)! / Π_(a,b) r(a,b)!."""
    if Multiset(b for _, b in r) != p:
        raise MarginalMismatch(f"column marginal of {r} is not {p}")
    return Fraction(multiset_factorial(p), multiset_factorial(r))


class LinComb(Generic[T]):
    """Finitely supported formal sum Σ c·t with coefficients in a semiring."""

    __slots__ = ("_terms", "mode", "_sorted")

    def __init__(
        self,
        terms: Mapping[T, Any] | Iterable[tuple[T, Any]] = (),
        mode: SemiringMode = SemiringMode.RAT,
    ):
        self.mode = mode
        self._sorted: tuple[tuple[T, Fraction], ...] | None = None
        acc: dict[T, Fraction] = {}
        pairs = terms.items() if isinstance(terms, Mapping) else terms
        for t, c in pairs:
            q = mode.coerce(c)
            if q:
                acc[t] = mode.add(acc.get(t, ZERO), q)
        self._terms = {t: c for t, c in acc.items() if c}

    @classmethod
    def zero(cls, mode: SemiringMode = SemiringMode.RAT) -> "LinComb[T]":
        return cls((), mode)

    @classmethod
    def single(cls, term: T, coeff: Any = 1, mode: SemiringMode = SemiringMode.RAT) -> "LinComb[T]":
        return cls(((term, coeff),), mode)

    def items(self) -> tuple[tuple[T, Fraction], ...]:
        if self._sorted is None:
            self._sorted = tuple(sorted(self._terms.items(), key=lambda tc: canonical_key(tc[0])))
        return self._sorted

    def terms(self) -> tuple[T, ...]:
        return tuple(t for t, _ in self.items())

    def coeff(self, t: T) -> Fraction:
        return self._terms.get(t, ZERO)

    def __iter__(self) -> Iterator[tuple[T, Fraction]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LinComb) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def sort_key(self) -> tuple:
        return tuple((canonical_key(t), c) for t, c in self.items())

    def __add__(self, other: "LinComb[T]") -> "LinComb[T]":
        return LinComb([*self._terms.items(), *other._terms.items()], self.mode)

    def scale(self, c: Any) -> "LinComb[T]":
        q = self.mode.coerce(c)
        return LinComb(((t, q * v) for t, v in self._terms.items()), self.mode)

    def __mul__(self, c: Any) -> "LinComb[T]":
        return self.scale(c)

    __rmul__ = __mul__

    def __neg__(self) -> "LinComb[T]":
        return self.scale(-1)

    def __sub__(self, other: "LinComb[T]") -> "LinComb[T]":
        return self + other.scale(-1)

    def with_mode(self, mode: SemiringMode) -> "LinComb[T]":
        return LinComb(self._terms, mode)

    def map_terms(self, f: Callable[[T], Any]) -> "LinComb":
        """Image under a map on terms, merging coefficients of equal images."""
        return LinComb(((f(t), c) for t, c in self._terms.items()), self.mode)

    def bind(self, f: Callable[[T], "LinComb"]) -> "LinComb":
        """Linear extension: Σ c·t ↦ Σ c·f(t)."""
        pairs: list[tuple[Any, Fraction]] = []
        for t, c in self.items():
            for u, d in f(t).items():
                pairs.append((u, c * d))
        return LinComb(pairs, self.mode)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"{format_scalar(c)}*{t!r}" for t, c in self.items())


def lincomb_combine(op: str, args: Iterable[Any], mode: SemiringMode = SemiringMode.RAT) -> LinComb:
    """Free-module operations: ``add`` sums the combinations, ``scale`` takes (c, comb)."""
    args = list(args)
    if op == "add":
        out: LinComb = LinComb.zero(mode)
        for a in args:
            out = out + a.with_mode(mode)
        return out
    if op == "scale":
        c, comb_ = args
        return comb_.with_mode(mode).scale(c)
    raise ValueError(f"unknown operation {op!r}")
