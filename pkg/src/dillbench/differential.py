"""Differential λ-calculus.

Simple terms are variables, abstractions, applications ``(M) R`` whose
argument R is a combination, and differential applications ``D M . N``.
Every constructor is linear except the argument of an ordinary application.
Chains of differential applications are kept with their directions sorted,
so D(D M . N1) . N2 and D(D M . N2) . N1 are the same value.
"""

import logging
import random
from collections.abc import Callable, Iterator
from dataclasses import dataclass
from functools import cached_property

from .algebra import LinComb, canonical_key
from .errors import FuelExhausted, NotARedex

logger = logging.getLogger(__name__)


class DTerm:
    @cached_property
    def _key(self) -> tuple:
        return self._fields_key()

    def _fields_key(self) -> tuple:
        raise NotImplementedError

    def sort_key(self) -> tuple:
        return self._key

    def __str__(self) -> str:
        from .parser import print_dterm

        return print_dterm(self)


DComb = LinComb[DTerm]


@dataclass(frozen=True)
class Var(DTerm):
    name: str

    def _fields_key(self) -> tuple:
        return (0, self.name)


@dataclass(frozen=True)
class Abs(DTerm):
    var: str
    body: DTerm

    def _fields_key(self) -> tuple:
        return (1, self.var, self.body.sort_key())


@dataclass(frozen=True)
class App(DTerm):
    """Ordinary application (head) arg."""

    head: DTerm
    arg: LinComb

    def _fields_key(self) -> tuple:
        return (2, self.head.sort_key(), self.arg.sort_key())


@dataclass(frozen=True)
class DApp(DTerm):
    """D(...(D head . n1)...) . nk with the directions in canonical order."""

    head: DTerm
    directions: tuple[DTerm, ...]

    def __post_init__(self) -> None:
        head, dirs = self.head, tuple(self.directions)
        if isinstance(head, DApp):
            head, dirs = head.head, head.directions + dirs
        if not dirs:
            raise ValueError("differential application without a direction")
        object.__setattr__(self, "head", head)
        object.__setattr__(self, "directions", tuple(sorted(dirs, key=canonical_key)))

    def _fields_key(self) -> tuple:
        return (3, self.head.sort_key(), tuple(d.sort_key() for d in self.directions))


# Constructors on combinations


def single(t: DTerm) -> DComb:
    return LinComb.single(t)


def var(name: str) -> DComb:
    return single(Var(name))


def abstract(x: str, body: DComb) -> DComb:
    return body.map_terms(lambda t: Abs(x, t))


def apply(head: DComb, arg: DComb) -> DComb:
    """Linear in the head only."""
    return head.map_terms(lambda t: App(t, arg))


def differentiate(head: DComb, direction: DComb) -> DComb:
    """D head . direction, bilinear."""
    return head.bind(lambda t: direction.map_terms(lambda n: DApp(t, (n,))))


def chain(head: DComb, directions: tuple[DTerm, ...]) -> DComb:
    for n in directions:
        head = differentiate(head, single(n))
    return head


# Variables


def free_vars(t: DTerm) -> frozenset[str]:
    match t:
        case Var(name):
            return frozenset((name,))
        case Abs(x, body):
            return free_vars(body) - {x}
        case App(head, arg):
            return free_vars(head) | comb_free_vars(arg)
        case DApp(head, dirs):
            out = free_vars(head)
            for d in dirs:
                out |= free_vars(d)
            return out
    raise TypeError(f"not a term: {t!r}")


def comb_free_vars(comb: DComb) -> frozenset[str]:
    out: frozenset[str] = frozenset()
    for t, _ in comb:
        out |= free_vars(t)
    return out


def names(t: DTerm) -> set[str]:
    """Every variable name, bound or free."""
    match t:
        case Var(name):
            return {name}
        case Abs(x, body):
            return {x} | names(body)
        case App(head, arg):
            out = names(head)
            for s, _ in arg:
                out |= names(s)
            return out
        case DApp(head, dirs):
            out = names(head)
            for d in dirs:
                out |= names(d)
            return out
    raise TypeError(f"not a term: {t!r}")


def fresh_name(base: str, avoid: set[str] | frozenset[str]) -> str:
    base = base.rstrip("0123456789") or "x"
    i = 0
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


def _rename_binder(x: str, body: DTerm, avoid: frozenset[str]) -> tuple[str, DTerm]:
    """Rename the binder x of body away from avoid."""
    if x not in avoid:
        return x, body
    y = fresh_name(x, avoid | names(body))
    return y, subst(body, var(y), x).terms()[0]


# Substitutions


def subst(t: DTerm, r: DComb, x: str) -> DComb:
    """t[r/x]: linear in t, not in r."""
    match t:
        case Var(name):
            return r if name == x else single(t)
        case Abs(y, body):
            if y == x:
                return single(t)
            y, body = _rename_binder(y, body, comb_free_vars(r))
            return abstract(y, subst(body, r, x))
        case App(head, arg):
            return apply(subst(head, r, x), arg.bind(lambda s: subst(s, r, x)))
        case DApp(head, dirs):
            out = subst(head, r, x)
            for d in dirs:
                out = differentiate(out, subst(d, r, x))
            return out
    raise TypeError(f"not a term: {t!r}")


def comb_subst(m: DComb, r: DComb, x: str) -> DComb:
    return m.bind(lambda t: subst(t, r, x))


def dsubst(t: DTerm, n: DComb, x: str) -> DComb:
    """Linear substitution ∂t/∂x · n, bilinear in t and n."""
    match t:
        case Var(name):
            return n if name == x else LinComb.zero()
        case Abs(y, body):
            if y == x:
                return LinComb.zero()
            y, body = _rename_binder(y, body, comb_free_vars(n) | {x})
            return abstract(y, dsubst(body, n, x))
        case App(head, arg):
            along_head = apply(dsubst(head, n, x), arg)
            darg = arg.bind(lambda s: dsubst(s, n, x))
            along_arg = apply(differentiate(single(head), darg), arg)
            return along_head + along_arg
        case DApp(head, dirs):
            out = chain(dsubst(head, n, x), dirs)
            for i, d in enumerate(dirs):
                others = dirs[:i] + dirs[i + 1:]
                out = out + chain(differentiate(single(head), dsubst(d, n, x)), others)
            return out
    raise TypeError(f"not a term: {t!r}")


def comb_dsubst(m: DComb, n: DComb, x: str) -> DComb:
    return m.bind(lambda t: dsubst(t, n, x))


# Reduction


@dataclass(frozen=True)
class DRedex:
    """Redex at ``path``; ``direction`` picks the derivative of a D-chain (dbeta)."""

    path: tuple[tuple[str, int], ...]
    kind: str  # beta | dbeta
    direction: int = 0


def redexes(t: DTerm) -> Iterator[DRedex]:
    """Redexes of t, outermost first, then left to right."""
    match t:
        case App(Abs(), _):
            yield DRedex((), "beta")
        case DApp(Abs(), dirs):
            for i in range(len(dirs)):
                yield DRedex((), "dbeta", i)
    match t:
        case Abs(_, body):
            for r in redexes(body):
                yield DRedex((("body", 0), *r.path), r.kind, r.direction)
        case App(head, arg):
            for r in redexes(head):
                yield DRedex((("head", 0), *r.path), r.kind, r.direction)
            for j, (s, _) in enumerate(arg.items()):
                for r in redexes(s):
                    yield DRedex((("arg", j), *r.path), r.kind, r.direction)
        case DApp(head, dirs):
            for r in redexes(head):
                yield DRedex((("head", 0), *r.path), r.kind, r.direction)
            for i, d in enumerate(dirs):
                for r in redexes(d):
                    yield DRedex((("dir", i), *r.path), r.kind, r.direction)


def beta_step(t: DTerm) -> DComb:
    """(λx.M) R ⇝ M[R/x]."""
    if not (isinstance(t, App) and isinstance(t.head, Abs)):
        raise NotARedex(f"{t} is not a β-redex")
    return subst(t.head.body, t.arg, t.head.var)


def dbeta_step(t: DTerm, direction: int = 0) -> DComb:
    """D(λx.M) · N ⇝ λx.(∂M/∂x · N), on one direction of a chain."""
    if not (isinstance(t, DApp) and isinstance(t.head, Abs)):
        raise NotARedex(f"{t} is not a differential β-redex")
    n = t.directions[direction]
    others = t.directions[:direction] + t.directions[direction + 1:]
    x, body = _rename_binder(t.head.var, t.head.body, free_vars(n))
    return chain(abstract(x, dsubst(body, single(n), x)), others)


def reduce_at(t: DTerm, r: DRedex) -> DComb:
    if not r.path:
        return beta_step(t) if r.kind == "beta" else dbeta_step(t, r.direction)
    (step, i), rest = r.path[0], DRedex(r.path[1:], r.kind, r.direction)
    match t, step:
        case Abs(x, body), "body":
            return abstract(x, reduce_at(body, rest))
        case App(head, arg), "head":
            return apply(reduce_at(head, rest), arg)
        case App(head, arg), "arg":
            s, c = arg.items()[i]
            new_arg = arg - LinComb.single(s, c) + reduce_at(s, rest).scale(c)
            return single(App(head, new_arg))
        case DApp(head, dirs), "head":
            return chain(reduce_at(head, rest), dirs)
        case DApp(head, dirs), "dir":
            others = dirs[:i] + dirs[i + 1:]
            return differentiate(chain(single(head), others), reduce_at(dirs[i], rest))
    raise NotARedex(f"no redex at {r.path} in {t}")


def step_comb(m: DComb, rng: random.Random | None = None) -> DComb | None:
    """One reduction step on some term of m; None when m is normal.

    Without ``rng`` the leftmost-outermost redex of the first reducible term
    is contracted, otherwise a redex picked uniformly at random.
    """
    choices = [(t, c, r) for t, c in m.items() for r in redexes(t)]
    if not choices:
        return None
    if rng is None:
        t, c, r = choices[0]
    else:
        t, c, r = rng.choice(choices)
    return m - LinComb.single(t, c, m.mode) + reduce_at(t, r).with_mode(m.mode).scale(c)


def normalize_dterm(m: DComb, fuel: int = 1000, seed: int | None = None) -> DComb:
    """Normal form of m, up to α (result is α-normalized)."""
    rng = random.Random(seed) if seed is not None else None
    for steps in range(fuel + 1):
        nxt = step_comb(m, rng)
        if nxt is None:
            logger.debug("differential term normal after %d steps", steps)
            return alpha_normal_comb(m)
        m = nxt
    raise FuelExhausted(m, fuel)


# α-normal forms


def _level_names(avoid: frozenset[str]) -> Callable[[int], str]:
    out: list[str] = []
    i = 0

    def name(depth: int) -> str:
        nonlocal i
        while len(out) <= depth:
            while f"v{i}" in avoid:
                i += 1
            out.append(f"v{i}")
            i += 1
        return out[depth]

    return name


def alpha_normal(t: DTerm) -> DTerm:
    """Rename binders by nesting depth (v0, v1, ...), keeping free names."""
    level = _level_names(free_vars(t))

    def go(t: DTerm, env: dict[str, str], depth: int) -> DTerm:
        match t:
            case Var(name):
                return Var(env.get(name, name))
            case Abs(x, body):
                y = level(depth)
                return Abs(y, go(body, {**env, x: y}, depth + 1))
            case App(head, arg):
                return App(go(head, env, depth), arg.map_terms(lambda s: go(s, env, depth)))
            case DApp(head, dirs):
                return DApp(go(head, env, depth), tuple(go(d, env, depth) for d in dirs))
        raise TypeError(f"not a term: {t!r}")

    return go(t, {}, 0)


def alpha_normal_comb(m: DComb) -> DComb:
    return m.map_terms(alpha_normal)


def size(t: DTerm) -> int:
    match t:
        case Var():
            return 1
        case Abs(_, body):
            return 1 + size(body)
        case App(head, arg):
            return 1 + size(head) + sum(size(s) for s, _ in arg)
        case DApp(head, dirs):
            return len(dirs) + size(head) + sum(size(d) for d in dirs)
    raise TypeError(f"not a term: {t!r}")
