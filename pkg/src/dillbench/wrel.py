"""The weighted model: finitely supported matrices over webs.

A WMorphism carries its semiring mode; the relational model is the same
construction over the boolean semiring, where every nonzero weight becomes 1.
Exponentials are truncated at a bound D: entries involving a multiset larger
than D are never produced.
"""

import logging
import random
from collections import defaultdict
from collections.abc import Callable, Iterable, Iterator, Mapping
from fractions import Fraction
from functools import cached_property
from itertools import combinations_with_replacement, product
from math import factorial
from typing import Any, Optional

from .algebra import (
    EMPTY,
    ONE,
    Multiset,
    SemiringMode,
    canonical_key,
    enumerate_L,
    format_scalar,
    multiset_binomial,
    multiset_factorial,
    multiset_multinomial,
)
from .errors import (
    DegreeExceedsBound,
    ModeViolation,
    NotPolynomialUpTo,
    SymmetryViolation,
    WebMismatch,
)
from .webs import (
    EMPTY_WEB,
    STAR,
    ExclWeb,
    Point,
    ProdWeb,
    UnitWeb,
    Web,
    WithWeb,
    encode_point,
    excl,
    pair_web,
)

logger = logging.getLogger(__name__)

Vector = dict[Point, Fraction]
Row = dict[Point, Fraction]


class WMorphism:
    """Matrix from ``source`` to ``target``; only nonzero entries are stored."""

    def __init__(
        self,
        source: Web,
        target: Web,
        entries: Mapping[tuple[Point, Point], Any] | Iterable[tuple[tuple[Point, Point], Any]] = (),
        mode: SemiringMode = SemiringMode.RAT,
    ):
        self.source = source
        self.target = target
        self.mode = mode
        acc: dict[tuple[Point, Point], Fraction] = {}
        pairs = entries.items() if isinstance(entries, Mapping) else entries
        for key, value in pairs:
            q = mode.coerce(value)
            if q:
                acc[key] = mode.add(acc.get(key, Fraction(0)), q)
        self._entries = {k: v for k, v in acc.items() if v}

    @property
    def entries(self) -> dict[tuple[Point, Point], Fraction]:
        return self._entries

    @cached_property
    def rows(self) -> dict[Point, Row]:
        out: dict[Point, Row] = defaultdict(dict)
        for (a, b), q in self._entries.items():
            out[a][b] = q
        return dict(out)

    def row(self, a: Point) -> Row:
        return self.rows.get(a, {})

    def __getitem__(self, key: tuple[Point, Point]) -> Fraction:
        return self._entries.get(key, Fraction(0))

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, WMorphism)
            and self.source == other.source
            and self.target == other.target
            and self._entries == other._entries
        )

    def __hash__(self) -> int:
        return hash(frozenset(self._entries.items()))

    def __repr__(self) -> str:
        body = ", ".join(
            f"{k!r}: {format_scalar(v)}" for k, v in sorted(self._entries.items(), key=canonical_key_item)
        )
        return f"WMorphism({{{body}}})"

    def _same_shape(self, other: "WMorphism") -> None:
        if self.source != other.source or self.target != other.target:
            raise WebMismatch("matrices between different webs")

    def __add__(self, other: "WMorphism") -> "WMorphism":
        self._same_shape(other)
        return WMorphism(self.source, self.target,
                         [*self._entries.items(), *other._entries.items()], self.mode)

    def scale(self, c: Any) -> "WMorphism":
        q = self.mode.coerce(c)
        return WMorphism(self.source, self.target,
                         ((k, q * v) for k, v in self._entries.items()), self.mode)

    def __sub__(self, other: "WMorphism") -> "WMorphism":
        if self.mode is not SemiringMode.RAT:
            raise ModeViolation("subtraction needs rational coefficients")
        return self + other.scale(-1)

    def __matmul__(self, other: "WMorphism") -> "WMorphism":
        """self ∘ other"""
        return compose(self, other)

    def with_mode(self, mode: SemiringMode) -> "WMorphism":
        return WMorphism(self.source, self.target, self._entries, mode)

    def transpose(self) -> "WMorphism":
        return WMorphism(self.target, self.source,
                         (((b, a), v) for (a, b), v in self._entries.items()), self.mode)

    def apply(self, x: Mapping[Point, Any]) -> Vector:
        out: Vector = {}
        for a, xa in x.items():
            for b, q in self.row(a).items():
                out[b] = self.mode.add(out.get(b, Fraction(0)), self.mode.coerce(q * xa))
        return {b: q for b, q in out.items() if q}

    def restrict(self, source: Optional[Web] = None, target: Optional[Web] = None) -> "WMorphism":
        """Keep the entries whose points lie in the given (smaller) webs."""
        source = source or self.source
        target = target or self.target
        return WMorphism(source, target,
                         ((k, v) for k, v in self._entries.items() if k[0] in source and k[1] in target),
                         self.mode)

    def first_difference(self, other: "WMorphism") -> Optional[tuple[tuple[Point, Point], Fraction, Fraction]]:
        """First entry, in canonical order, where the two matrices disagree."""
        keys = sorted(set(self._entries) | set(other._entries), key=canonical_key)
        for k in keys:
            if self[k] != other[k]:
                return k, self[k], other[k]
        return None

    def dump(self) -> list[dict]:
        """JSON-ready list of entries in canonical order."""
        return [
            {"row": encode_point(a), "col": encode_point(b), "val": format_scalar(v)}
            for (a, b), v in sorted(self._entries.items(), key=canonical_key_item)
        ]


def canonical_key_item(item: tuple[tuple[Point, Point], Fraction]) -> tuple:
    return canonical_key(item[0])


def compose(g: WMorphism, f: WMorphism) -> WMorphism:
    """g ∘ f"""
    if f.target != g.source:
        raise WebMismatch("cannot compose: target of f is not the source of g")
    acc: dict[tuple[Point, Point], Fraction] = {}
    for a, row in f.rows.items():
        for b, q in row.items():
            for c, r in g.row(b).items():
                acc[(a, c)] = acc.get((a, c), Fraction(0)) + q * r
    return WMorphism(f.source, g.target, acc, f.mode)


def compose_all(*ms: WMorphism) -> WMorphism:
    """m1 ∘ m2 ∘ ... ∘ mk"""
    out = ms[-1]
    for m in reversed(ms[:-1]):
        out = compose(m, out)
    return out


def tensor(f: WMorphism, g: WMorphism) -> WMorphism:
    entries = (
        (((a, c), (b, d)), q * r)
        for (a, b), q in f.entries.items()
        for (c, d), r in g.entries.items()
    )
    return WMorphism(pair_web(f.source, g.source), pair_web(f.target, g.target), entries, f.mode)


def identity(x: Web, mode: SemiringMode = SemiringMode.RAT) -> WMorphism:
    return WMorphism(x, x, (((a, a), 1) for a in x.points), mode)


def zero(source: Web, target: Web, mode: SemiringMode = SemiringMode.RAT) -> WMorphism:
    return WMorphism(source, target, (), mode)


def relabel(source: Web, target: Web, f: Callable[[Point], Point],
            mode: SemiringMode = SemiringMode.RAT) -> WMorphism:
    """0/1 matrix of a bijection on points."""
    return WMorphism(source, target, (((a, f(a)), 1) for a in source.points), mode)


def symmetry(x: Web, y: Web, mode: SemiringMode = SemiringMode.RAT) -> WMorphism:
    return relabel(pair_web(x, y), pair_web(y, x), lambda p: (p[1], p[0]), mode)


def swap23(x: Web, y: Web, z: Web, mode: SemiringMode = SemiringMode.RAT) -> WMorphism:
    """(x ⊗ y) ⊗ z → (x ⊗ z) ⊗ y"""
    return relabel(pair_web(pair_web(x, y), z), pair_web(pair_web(x, z), y),
                   lambda p: ((p[0][0], p[1]), p[0][1]), mode)


# Generators


def der(x: Web, bound: int, mode: SemiringMode = SemiringMode.RAT) -> WMorphism:
    """!X → X"""
    return WMorphism(excl(x, bound), x, (((Multiset([a]), a), 1) for a in x.points if bound >= 1), mode)


def coder(x: Web, bound: int, mode: SemiringMode = SemiringMode.RAT) -> WMorphism:
    """X → !X"""
    return der(x, bound, mode).transpose()


def weak(x: Web, bound: int, mode: SemiringMode = SemiringMode.RAT) -> WMorphism:
    """!X → 1"""
    return WMorphism(excl(x, bound), UnitWeb(), [((EMPTY, STAR), 1)], mode)


def coweak(x: Web, bound: int, mode: SemiringMode = SemiringMode.RAT) -> WMorphism:
    """1 → !X"""
    return weak(x, bound, mode).transpose()


def contr(x: Web, bound: int, mode: SemiringMode = SemiringMode.RAT) -> WMorphism:
    """!X → !X ⊗ !X, one entry per split of the multiset."""
    ex = excl(x, bound)
    entries = (((m, (l, r)), 1) for m in ex.points for l, r in m.splits())
    return WMorphism(ex, pair_web(ex, ex), entries, mode)


def cocontr(x: Web, bound: int, mode: SemiringMode = SemiringMode.RAT) -> WMorphism:
    """!X ⊗ !X → !X weighted by the binomial of the split."""
    ex = excl(x, bound)
    entries = (
        (((l, r), l + r), multiset_binomial(l + r, l))
        for l in ex.points
        for r in ex.points
        if len(l) + len(r) <= bound
    )
    return WMorphism(pair_web(ex, ex), ex, entries, mode)


def _ordered_parts(m: Multiset, k: int) -> Iterator[tuple[Multiset, ...]]:
    """Ordered k-tuples of multisets summing to m."""
    if k == 0:
        if not len(m):
            yield ()
        return
    if k == 1:
        yield (m,)
        return
    for first in m.submultisets():
        for rest in _ordered_parts(m - first, k - 1):
            yield (first, *rest)


def digg_row(m: Multiset, bound: int) -> set[Multiset]:
    """All M in !!X with ΣM = m."""
    out: set[Multiset] = set()
    for k in range(bound + 1):
        for parts in _ordered_parts(m, k):
            out.add(Multiset(parts))
    return out


def digg(x: Web, bound: int, mode: SemiringMode = SemiringMode.RAT) -> WMorphism:
    """!X → !!X with entries δ(m, ΣM)."""
    ex = excl(x, bound)
    entries = (((m, big), 1) for m in ex.points for big in digg_row(m, bound))
    return WMorphism(ex, excl(ex, bound), entries, mode)


def derc(x: Web, bound: int, mode: SemiringMode = SemiringMode.RAT) -> WMorphism:
    """∂ = (Id ⊗ der) ∘ c : !X → !X ⊗ X"""
    ex = excl(x, bound)
    entries = (((m, (m - Multiset([a]), a)), 1) for m in ex.points for a in m.support())
    return WMorphism(ex, pair_web(ex, x), entries, mode)


def coderc(x: Web, bound: int, mode: SemiringMode = SemiringMode.RAT) -> WMorphism:
    """∂̄ = c̄ ∘ (Id ⊗ coder) : !X ⊗ X → !X"""
    ex = excl(x, bound)
    entries = []
    for l in ex.points:
        if len(l) >= bound:
            continue
        for a in x.points:
            m = l + Multiset([a])
            entries.append((((l, a), m), m.count(a)))
    return WMorphism(pair_web(ex, x), ex, entries, mode)


def seely2(x: Web, y: Web, bound: int, mode: SemiringMode = SemiringMode.RAT) -> WMorphism:
    """!X ⊗ !Y → !(X & Y)"""
    ex, ey = excl(x, bound), excl(y, bound)
    entries = (
        (((l, r), l.map(lambda a: ("inl", a)) + r.map(lambda b: ("inr", b))), 1)
        for l in ex.points
        for r in ey.points
        if len(l) + len(r) <= bound
    )
    return WMorphism(pair_web(ex, ey), excl(WithWeb(x, y), bound), entries, mode)


def seely0(bound: int, mode: SemiringMode = SemiringMode.RAT) -> WMorphism:
    """1 → !⊤"""
    return WMorphism(UnitWeb(), excl(EMPTY_WEB, bound), [((STAR, EMPTY), 1)], mode)


def mu(x: Web, y: Web, bound: int, mode: SemiringMode = SemiringMode.RAT) -> WMorphism:
    """Lax monoidal μ : !X ⊗ !Y → !(X ⊗ Y); m is hit from the pair of its marginals."""
    ex, ey = excl(x, bound), excl(y, bound)
    entries = (
        (((l, r), m), 1)
        for l in ex.points
        for r in ey.points
        if len(l) == len(r)
        for m in enumerate_L(l, r)
    )
    return WMorphism(pair_web(ex, ey), excl(pair_web(x, y), bound), entries, mode)


def diag(x: Web, mode: SemiringMode = SemiringMode.RAT) -> WMorphism:
    """X → X & X"""
    return pair(identity(x, mode), identity(x, mode))


def pair(f: WMorphism, g: WMorphism) -> WMorphism:
    """⟨f, g⟩ : X → Y & Z"""
    if f.source != g.source:
        raise WebMismatch("pairing of matrices with different sources")
    entries = [
        *(((a, ("inl", b)), q) for (a, b), q in f.entries.items()),
        *(((a, ("inr", c)), q) for (a, c), q in g.entries.items()),
    ]
    return WMorphism(f.source, WithWeb(f.target, g.target), entries, f.mode)


def proj(x: Web, y: Web, side: int, mode: SemiringMode = SemiringMode.RAT) -> WMorphism:
    """π_side : X & Y → X (side 0) or Y (side 1)"""
    tag, part = ("inl", x) if side == 0 else ("inr", y)
    return WMorphism(WithWeb(x, y), part, (((((tag, a)), a), 1) for a in part.points), mode)


GENERATORS: dict[str, Callable[..., WMorphism]] = {
    "der": der,
    "coder": coder,
    "weak": weak,
    "coweak": coweak,
    "contr": contr,
    "cocontr": cocontr,
    "digg": digg,
    "derc": derc,
    "coderc": coderc,
}


def w_generator(kind: str, x: Web, bound: int, y: Optional[Web] = None,
                mode: SemiringMode = SemiringMode.RAT) -> WMorphism:
    """Generator by name; ``seely2`` and ``mu`` take a second web, ``seely0``
    and ``mix0`` none."""
    if kind in GENERATORS:
        return GENERATORS[kind](x, bound, mode)
    if kind in ("seely2", "mu"):
        if y is None:
            raise WebMismatch(f"{kind} needs two webs")
        return (seely2 if kind == "seely2" else mu)(x, y, bound, mode)
    if kind == "seely0":
        return seely0(bound, mode)
    if kind == "mix0":
        return identity(UnitWeb(), mode)
    if kind == "mix2":
        return identity(pair_web(x, y or x), mode)
    raise ValueError(f"unknown generator {kind!r}")


# The exponential functor and promotion


def excl_row(row_of: Callable[[Point], Row], m: Multiset) -> Row:
    """Row m of !M: Σ over matchings r with row marginal m of [q r]·M^r."""
    choices = []
    for a, n in m.items():
        targets = sorted(row_of(a).items(), key=lambda kv: canonical_key(kv[0]))
        if not targets:
            return {}
        choices.append([(a, picked) for picked in combinations_with_replacement(targets, n)])
    out: Row = {}
    for combo in product(*choices):
        pairs: list[tuple[Point, Point]] = []
        weight = ONE
        for a, picked in combo:
            for b, q in picked:
                pairs.append((a, b))
                weight *= q
        r = Multiset(pairs)
        q_ms = Multiset(b for _, b in pairs)
        weight *= multiset_multinomial(q_ms, r)
        out[q_ms] = out.get(q_ms, Fraction(0)) + weight
    return {k: v for k, v in out.items() if v}


def w_excl(m: WMorphism, bound: int) -> WMorphism:
    """!M on the webs truncated at ``bound``; functorial."""
    source = excl(m.source, bound)
    entries = ((((p, q)), v) for p in source.points for q, v in excl_row(m.row, p).items())
    return WMorphism(source, excl(m.target, bound), entries, m.mode)


def w_prom_vector(x: Mapping[Point, Any], bound: int) -> Vector:
    """x^! = (x^m) for |m| ≤ bound, over the support of x."""
    support = sorted((a for a, v in x.items() if v), key=canonical_key)
    out: Vector = {}
    for k in range(bound + 1):
        for combo in combinations_with_replacement(support, k):
            m = Multiset(combo)
            v = ONE
            for a, n in m.items():
                v *= Fraction(x[a]) ** n
            out[m] = v
    return out


def w_fun(m: WMorphism, x: Mapping[Point, Any], bound: int) -> Vector:
    """Fun(M)(x) = Σ_m M_{m,b} x^m."""
    return m.apply(w_prom_vector(x, bound))


def gen_digg_row(ms: tuple[Multiset, ...], bound: int) -> set[Multiset]:
    """Row of the generalized digging ⊗!A_i → !(⊗!A_i) at (m_1, ..., m_n)."""
    out: set[Multiset] = set()
    for k in range(bound + 1):
        per_coord = [list(_ordered_parts(m, k)) for m in ms]
        for split in product(*per_coord):
            out.add(Multiset(tuple(parts[j] for parts in split) for j in range(k)))
    return out


def promotion_row(row_of: Callable[[Point], Row], ms: tuple[Multiset, ...], bound: int) -> Row:
    """Row (m_1, ..., m_n) of Prom f = !f ∘ p."""
    out: Row = {}
    for big in gen_digg_row(ms, bound):
        for q, v in excl_row(row_of, big).items():
            out[q] = out.get(q, Fraction(0)) + v
    return {k: v for k, v in out.items() if v}


def w_promotion(f: WMorphism, bound: int) -> WMorphism:
    """Prom f : ⊗ !A_i → !B for f : ⊗ !A_i → B (source a flat product)."""
    if not isinstance(f.source, ProdWeb) or not all(isinstance(w, ExclWeb) for w in f.source.parts):
        raise WebMismatch("promotion needs a product of exponentials as source")
    entries = (
        ((ms, q), v)
        for ms in f.source.points
        for q, v in promotion_row(f.row, ms, bound).items()
    )
    return WMorphism(f.source, excl(f.target, bound), entries, f.mode)


# Taylor operators


def _require_rat(mode: SemiringMode, what: str) -> None:
    if mode is not SemiringMode.RAT:
        raise ModeViolation(f"{what} needs rational coefficients")


def power_web(x: Web, n: int) -> Web:
    """X ⊗ ... ⊗ X as a flat product; the unit for n = 0."""
    return ProdWeb((x,) * n) if n else UnitWeb()


def d_pow(x: Web, n: int, bound: int, mode: SemiringMode = SemiringMode.RAT) -> WMorphism:
    """dⁿ = der^⊗n ∘ cⁿ : !X → X^⊗n"""
    ex = excl(x, bound)
    target = power_web(x, n)
    if n == 0:
        return WMorphism(ex, target, [((EMPTY, STAR), 1)], mode)
    entries = (((Multiset(t), t), 1) for t in target.points if n <= bound)
    return WMorphism(ex, target, entries, mode)


def dbar_pow(x: Web, n: int, bound: int, mode: SemiringMode = SemiringMode.RAT) -> WMorphism:
    """d̄ⁿ = cⁿ̄ ∘ coder^⊗n : X^⊗n → !X, weighted by m!"""
    ex = excl(x, bound)
    source = power_web(x, n)
    if n == 0:
        return WMorphism(source, ex, [((STAR, EMPTY), 1)], mode)
    entries = (((t, Multiset(t)), multiset_factorial(Multiset(t))) for t in source.points if n <= bound)
    return WMorphism(source, ex, entries, mode)


def taylor_T(x: Web, n: int, bound: int) -> WMorphism:
    """Tⁿ = Σ_{i≤n} (1/i!) d̄ⁱ ∘ dⁱ"""
    out = zero(excl(x, bound), excl(x, bound))
    for i in range(min(n, bound) + 1):
        out = out + compose(dbar_pow(x, i, bound), d_pow(x, i, bound)).scale(Fraction(1, factorial(i)))
    return out


def coderc_pow(x: Web, n: int, bound: int) -> WMorphism:
    """∂̄ ∘ (∂̄ ⊗ Id) ∘ ... : !X ⊗ X^⊗n → !X, on flat points (l, (a_1, ..., a_n))."""
    ex = excl(x, bound)
    source = pair_web(ex, power_web(x, n))
    entries = []
    for l in ex.points:
        if len(l) + n > bound:
            continue
        for t in power_web(x, n).points:
            m, w = l, ONE
            for a in t:
                m = m + Multiset([a])
                w *= m.count(a)
            entries.append((((l, t), m), w))
    return WMorphism(source, ex, entries)


def psi(x: Web, bound: int) -> WMorphism:
    """ψ = (∂̄ ⊗ Id) ∘ σ₂₃ ∘ (∂ ⊗ Id) : !X ⊗ X → !X ⊗ X"""
    ex = excl(x, bound)
    return compose_all(
        tensor(coderc(x, bound), identity(x)),
        swap23(ex, x, x),
        tensor(derc(x, bound), identity(x)),
    )


def J(x: Web, bound: int) -> WMorphism:
    """Id + ∂̄ ∘ ∂, diagonal with entries |p| + 1"""
    return identity(excl(x, bound)) + compose(coderc(x, bound), derc(x, bound))


def I(x: Web, bound: int) -> WMorphism:
    """Inverse of J: diagonal with entries 1/(|p| + 1)"""
    ex = excl(x, bound)
    return WMorphism(ex, ex, (((p, p), Fraction(1, len(p) + 1)) for p in ex.points))


def poly_degree(f: WMorphism, maxn: int) -> int:
    """Least n ≤ maxn with f ∘ ∂̄^{n+1} = 0."""
    _require_rat(f.mode, "polynomial degree")
    if not isinstance(f.source, ExclWeb):
        raise WebMismatch("a polynomial morphism has an exponential source")
    x, bound = f.source.base, f.source.bound
    if maxn > bound:
        raise DegreeExceedsBound(f"degree {maxn} exceeds the bound {bound}")
    for n in range(maxn + 1):
        if n + 1 > bound or not len(compose(f, coderc_pow(x, n + 1, bound))):
            return n
    raise NotPolynomialUpTo(maxn)


def poly_compose(g: WMorphism, f: WMorphism) -> WMorphism:
    """g ∘ f = Σ_i (1/i!) g ∘ d̄ⁱ ∘ f^⊗i ∘ cⁱ for f : !X → Y and g : !Y → Z."""
    _require_rat(f.mode, "composition of polynomials")
    if not isinstance(g.source, ExclWeb) or g.source.base != f.target:
        raise WebMismatch("g must start at the exponential of the target of f")
    bound = g.source.bound
    acc: dict[tuple[Point, Point], Fraction] = {}
    for m in f.source.points:
        for i in range(bound + 1):
            for parts in _ordered_parts(m, i):
                images: list[Row] = [f.row(p) for p in parts]
                if any(not r for r in images):
                    continue
                for picks in product(*(sorted(r.items(), key=lambda kv: canonical_key(kv[0])) for r in images)):
                    ys = Multiset(b for b, _ in picks)
                    if len(ys) > bound:
                        continue
                    w = Fraction(multiset_factorial(ys), factorial(i))
                    for _, q in picks:
                        w *= q
                    for z, r in g.row(ys).items():
                        acc[(m, z)] = acc.get((m, z), Fraction(0)) + w * r
    return WMorphism(f.source, g.target, acc)


def quasifunctor_pow(f: WMorphism, n: int, bound: int) -> WMorphism:
    """f⁰ = w̄ ∘ w, f^{k+1} = ∂̄ ∘ (f^k ⊗ f) ∘ ∂"""
    x, y = f.source, f.target
    out = compose(coweak(y, bound), weak(x, bound))
    for _ in range(n):
        out = compose_all(coderc(y, bound), tensor(out, f), derc(x, bound))
    return out


def check_symmetric(f: WMorphism, x: Web, bound: int) -> None:
    """f ∘ (∂̄ ⊗ Id) ∘ σ₂₃ = f ∘ (∂̄ ⊗ Id) for f : !X ⊗ X → Y."""
    ex = excl(x, bound)
    lifted = compose(f, tensor(coderc(x, bound), identity(x)))
    swapped = compose(lifted, swap23(ex, x, x))
    diff = lifted.first_difference(swapped)
    if diff is not None:
        raise SymmetryViolation(diff)


def poincare_antiderivative(f: WMorphism) -> WMorphism:
    """g = f ∘ (I ⊗ Id) ∘ ∂ for symmetric f : !X ⊗ X → Y.

    f lives on !X truncated at D; g is returned on !X truncated at D + 1, so
    that g ∘ ∂̄ = f holds on every entry of f.
    """
    _require_rat(f.mode, "the antiderivative")
    src = f.source
    if not (isinstance(src, ProdWeb) and len(src.parts) == 2 and isinstance(src.parts[0], ExclWeb)):
        raise WebMismatch("expected a matrix from !X ⊗ X")
    ex, x = src.parts
    bound = ex.bound
    check_symmetric(f, x, bound)
    big = bound + 1
    wide = WMorphism(pair_web(excl(x, big), x), f.target, f.entries)
    g = compose_all(wide, tensor(I(x, big), identity(x)), derc(x, big))
    logger.debug("antiderivative with %d entries", len(g))
    return g


def ftc_sides(x: Web, bound: int) -> tuple[WMorphism, WMorphism]:
    """∂̄ ∘ (I ⊗ Id) ∘ ∂ + w̄ ∘ w and Id on !X."""
    lhs = compose_all(coderc(x, bound), tensor(I(x, bound), identity(x)), derc(x, bound))
    lhs = lhs + compose(coweak(x, bound), weak(x, bound))
    return lhs, identity(excl(x, bound))


def fundamental_theorem_check(x: Web, bound: int) -> Optional[tuple[tuple[Point, Point], Fraction, Fraction]]:
    """Returns the first entry where ∂̄ ∘ (I ⊗ Id) ∘ ∂ + w̄ ∘ w differs from Id, or None."""
    lhs, rhs = ftc_sides(x, bound)
    return lhs.first_difference(rhs)


def vector_equal(a: Mapping[Point, Any], b: Mapping[Point, Any]) -> bool:
    keys = set(a) | set(b)
    return all(Fraction(a.get(k, 0)) == Fraction(b.get(k, 0)) for k in keys)


def random_matrix(source: Web, target: Web, rng: random.Random, density: float = 0.5,
                  values: tuple = (1, 2, -1, Fraction(1, 2))) -> WMorphism:
    """Random matrix for property checks."""
    entries = [
        ((a, b), rng.choice(values))
        for a in source.points
        for b in target.points
        if rng.random() < density
    ]
    return WMorphism(source, target, entries)

