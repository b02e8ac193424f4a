"""Finite resource calculus, Taylor expansion and resource antiderivatives.

A resource term applies a head to a bunch, a finite multiset of terms used
exactly once each. Application is multilinear in the head and in every slot
of the bunch, so ``<x>[y + z, y + z]`` stands for
``<x>[y, y] + 2 * <x>[y, z] + <x>[z, z]``.
"""

import logging
import random
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import permutations, product
from math import factorial, prod

from . import differential as dl
from .algebra import LinComb, Multiset
from .errors import FuelExhausted, NotARedex, NotLinearInH, SymmetryViolation

logger = logging.getLogger(__name__)


class RTerm:
    @cached_property
    def _key(self) -> tuple:
        return self._fields_key()

    def _fields_key(self) -> tuple:
        raise NotImplementedError

    def sort_key(self) -> tuple:
        return self._key

    def __str__(self) -> str:
        from .parser import print_rterm

        return print_rterm(self)


RComb = LinComb[RTerm]


@dataclass(frozen=True)
class Var(RTerm):
    name: str

    def _fields_key(self) -> tuple:
        return (0, self.name)


@dataclass(frozen=True)
class Abs(RTerm):
    var: str
    body: RTerm

    def _fields_key(self) -> tuple:
        return (1, self.var, self.body.sort_key())


@dataclass(frozen=True)
class BApp(RTerm):
    """<head>[bunch]"""

    head: RTerm
    bunch: Multiset

    def _fields_key(self) -> tuple:
        return (2, self.head.sort_key(), self.bunch.sort_key())


def single(t: RTerm) -> RComb:
    return LinComb.single(t)


def var(name: str) -> RComb:
    return single(Var(name))


def abstract(x: str, body: RComb) -> RComb:
    return body.map_terms(lambda t: Abs(x, t))


def bunch_apply(head: RComb, slots: Sequence[RComb]) -> RComb:
    """<head>[s1, ..., sn] expanded multilinearly."""
    pairs = []
    for h, c in head.items():
        for choice in product(*(s.items() for s in slots)):
            term = BApp(h, Multiset(t for t, _ in choice))
            pairs.append((term, c * prod((d for _, d in choice), start=Fraction(1))))
    return LinComb(pairs, head.mode)


# Variables and degrees


def free_vars(t: RTerm) -> frozenset[str]:
    match t:
        case Var(name):
            return frozenset((name,))
        case Abs(x, body):
            return free_vars(body) - {x}
        case BApp(head, bunch):
            out = free_vars(head)
            for s in bunch.support():
                out |= free_vars(s)
            return out
    raise TypeError(f"not a term: {t!r}")


def comb_free_vars(comb: RComb) -> frozenset[str]:
    out: frozenset[str] = frozenset()
    for t, _ in comb:
        out |= free_vars(t)
    return out


def names(t: RTerm) -> set[str]:
    match t:
        case Var(name):
            return {name}
        case Abs(x, body):
            return {x} | names(body)
        case BApp(head, bunch):
            out = names(head)
            for s in bunch.support():
                out |= names(s)
            return out
    raise TypeError(f"not a term: {t!r}")


def deg(t: RTerm, x: str) -> int:
    """Number of free occurrences of x in t."""
    match t:
        case Var(name):
            return int(name == x)
        case Abs(y, body):
            return 0 if y == x else deg(body, x)
        case BApp(head, bunch):
            return deg(head, x) + sum(deg(s, x) for s in bunch)
    raise TypeError(f"not a term: {t!r}")


def rename_binders(t: RTerm, avoid: frozenset[str]) -> RTerm:
    """α-rename every binder of t whose name is in avoid."""
    taken = set(avoid) | names(t)

    def go(t: RTerm, env: dict[str, str]) -> RTerm:
        match t:
            case Var(name):
                return Var(env.get(name, name))
            case Abs(x, body):
                if x in avoid:
                    y = dl.fresh_name(x, taken)
                    taken.add(y)
                    return Abs(y, go(body, {**env, x: y}))
                inner = {k: v for k, v in env.items() if k != x}
                return Abs(x, go(body, inner))
            case BApp(head, bunch):
                return BApp(go(head, env), bunch.map(lambda s: go(s, env)))
        raise TypeError(f"not a term: {t!r}")

    return go(t, {})


def replace_occurrences(t: RTerm, x: str, replacements: Iterator[RTerm]) -> RTerm:
    """Replace the free occurrences of x, left to right, by the next replacements.

    Occurrences are numbered head first, then the bunch in canonical order.
    The caller makes sure no binder of t captures a replacement.
    """
    match t:
        case Var(name):
            return next(replacements) if name == x else t
        case Abs(y, body):
            return t if y == x else Abs(y, replace_occurrences(body, x, replacements))
        case BApp(head, bunch):
            new_head = replace_occurrences(head, x, replacements)
            return BApp(new_head, Multiset([replace_occurrences(s, x, replacements) for s in bunch]))
    raise TypeError(f"not a term: {t!r}")


# Substitutions


def subst(t: RTerm, r: RComb, x: str) -> RComb:
    """t[r/x], every occurrence replaced by r, expanded multilinearly."""
    match t:
        case Var(name):
            return r if name == x else single(t)
        case Abs(y, body):
            if y == x:
                return single(t)
            if y in comb_free_vars(r):
                t = rename_binders(t, comb_free_vars(r))
                y, body = t.var, t.body
            return abstract(y, subst(body, r, x))
        case BApp(head, bunch):
            return bunch_apply(subst(head, r, x), [subst(s, r, x) for s in bunch])
    raise TypeError(f"not a term: {t!r}")


def comb_subst(m: RComb, r: RComb, x: str) -> RComb:
    return m.bind(lambda t: subst(t, r, x))


def derivative(t: RTerm, x: str, u: RComb) -> RComb:
    """∂t/∂x · u: the sum over the free occurrences of x of t with that occurrence replaced by u."""
    n = deg(t, x)
    if n == 0:
        return LinComb.zero(u.mode)
    t = rename_binders(t, comb_free_vars(u) | {x})
    pairs = []
    for i in range(n):
        for ut, c in u.items():
            reps = [Var(x)] * n
            reps[i] = ut
            pairs.append((replace_occurrences(t, x, iter(reps)), c))
    return LinComb(pairs, u.mode)


def comb_derivative(m: RComb, x: str, u: RComb) -> RComb:
    return m.bind(lambda t: derivative(t, x, u))


# Reduction


def bunch_reduce(t: RTerm) -> RComb:
    """<λx.s>S ⇝ Σ over bijections from S to the occurrences of x, or 0 if sizes differ."""
    if not (isinstance(t, BApp) and isinstance(t.head, Abs)):
        raise NotARedex(f"{t} is not a resource redex")
    x, body = t.head.var, t.head.body
    elements = list(t.bunch)
    if deg(body, x) != len(elements):
        return LinComb.zero()
    avoid: frozenset[str] = frozenset()
    for s in elements:
        avoid |= free_vars(s)
    body = rename_binders(body, avoid - {x})
    return LinComb((replace_occurrences(body, x, iter(perm)), 1) for perm in permutations(elements))


@dataclass(frozen=True)
class RRedex:
    path: tuple[tuple[str, int], ...]


def redexes(t: RTerm) -> Iterator[RRedex]:
    """Redex positions, outermost first, then left to right."""
    match t:
        case BApp(Abs(), _):
            yield RRedex(())
    match t:
        case Abs(_, body):
            for r in redexes(body):
                yield RRedex((("body", 0), *r.path))
        case BApp(head, bunch):
            for r in redexes(head):
                yield RRedex((("head", 0), *r.path))
            for j, s in enumerate(bunch):
                for r in redexes(s):
                    yield RRedex((("bunch", j), *r.path))


def reduce_at(t: RTerm, r: RRedex) -> RComb:
    if not r.path:
        return bunch_reduce(t)
    (step, i), rest = r.path[0], RRedex(r.path[1:])
    match t, step:
        case Abs(x, body), "body":
            return abstract(x, reduce_at(body, rest))
        case BApp(head, bunch), "head":
            return bunch_apply(reduce_at(head, rest), [single(s) for s in bunch])
        case BApp(head, bunch), "bunch":
            slots = [single(s) for s in bunch]
            slots[i] = reduce_at(list(bunch)[i], rest)
            return bunch_apply(single(head), slots)
    raise NotARedex(f"no redex at {r.path} in {t}")


def step_comb(m: RComb, rng: random.Random | None = None) -> RComb | None:
    choices = [(t, c, r) for t, c in m.items() for r in redexes(t)]
    if not choices:
        return None
    t, c, r = choices[0] if rng is None else rng.choice(choices)
    return m - LinComb.single(t, c, m.mode) + reduce_at(t, r).with_mode(m.mode).scale(c)


def normalize_resource(m: RComb, fuel: int = 10000, seed: int | None = None) -> RComb:
    """Normal form of m; the calculus is strongly normalizing, fuel is a safety net."""
    rng = random.Random(seed) if seed is not None else None
    for steps in range(fuel + 1):
        nxt = step_comb(m, rng)
        if nxt is None:
            logger.debug("resource term normal after %d steps", steps)
            return alpha_normal_comb(m)
        m = nxt
    raise FuelExhausted(m, fuel)


def alpha_normal(t: RTerm) -> RTerm:
    """Rename binders by nesting depth, keeping free names."""
    free = free_vars(t)
    levels: list[str] = []

    def level(depth: int) -> str:
        while len(levels) <= depth:
            i = len(levels)
            while f"v{i}" in free or f"v{i}" in levels:
                i += 1
            levels.append(f"v{i}")
        return levels[depth]

    def go(t: RTerm, env: dict[str, str], depth: int) -> RTerm:
        match t:
            case Var(name):
                return Var(env.get(name, name))
            case Abs(x, body):
                y = level(depth)
                return Abs(y, go(body, {**env, x: y}, depth + 1))
            case BApp(head, bunch):
                return BApp(go(head, env, depth), bunch.map(lambda s: go(s, env, depth)))
        raise TypeError(f"not a term: {t!r}")

    return go(t, {}, 0)


def alpha_normal_comb(m: RComb) -> RComb:
    return m.map_terms(alpha_normal)


# Taylor expansion


def taylor_term(t: dl.DTerm, multiplicity: int) -> RComb:
    """Taylor expansion of a simple term, truncated to ``multiplicity`` copies of each argument."""
    match t:
        case dl.Var(name):
            return var(name)
        case dl.Abs(x, body):
            return abstract(x, taylor_term(body, multiplicity))
        case dl.App(head, arg):
            linear: tuple[dl.DTerm, ...] = ()
            if isinstance(head, dl.DApp):
                head, linear = head.head, head.directions
            th = taylor_term(head, multiplicity)
            slots = [taylor_term(n, multiplicity) for n in linear]
            ta = taylor_expand(arg, multiplicity)
            out: RComb = LinComb.zero()
            for p in range(multiplicity + 1):
                out = out + bunch_apply(th, [*slots, *([ta] * p)]).scale(Fraction(1, factorial(p)))
            return out
        case dl.DApp():
            z = dl.fresh_name("z", dl.names(t))
            return abstract(z, taylor_term(dl.App(t, dl.var(z)), multiplicity))
    raise TypeError(f"not a term: {t!r}")


def taylor_expand(m: "dl.DComb", multiplicity: int) -> RComb:
    return m.bind(lambda t: taylor_term(t, multiplicity))


# Antiderivatives


def integrate_degree(u: RComb, x: str) -> RComb:
    """I_x: scale each simple term t by 1/(deg_x t + 1)."""
    return LinComb(((t, c / (deg(t, x) + 1)) for t, c in u.items()), u.mode)


def _check_linear_in(u: RComb, h: str) -> None:
    for t, _ in u:
        if deg(t, h) != 1:
            raise NotLinearInH(f"{t} has {deg(t, h)} free occurrences of {h}, expected 1")


def check_symmetry(u: RComb, x: str, h: str) -> None:
    """∂u/∂x · h' = ∂(u[h'/h])/∂x · h for a fresh h'."""
    h2 = dl.fresh_name(h, set(comb_free_vars(u)) | {x, h})
    lhs = alpha_normal_comb(comb_derivative(u, x, var(h2)))
    rhs = alpha_normal_comb(comb_derivative(comb_subst(u, var(h2), h), x, var(h)))
    if lhs != rhs:
        diff = lhs - rhs
        raise SymmetryViolation(diff.items()[0][0])


def antiderive_resource(u: RComb, x: str, h: str = "h") -> RComb:
    """v = I_x(u)[x/h] for u linear in h and symmetric in (x, h)."""
    _check_linear_in(u, h)
    check_symmetry(u, x, h)
    v = comb_subst(integrate_degree(u, x), var(x), h)
    logger.debug("antiderivative of %d terms along %s", len(u), x)
    return alpha_normal_comb(v)


def antiderivative_check(u: RComb, x: str, h: str = "h") -> RComb:
    """Antiderivative v of u, after checking ∂v/∂x · h = u exactly."""
    v = antiderive_resource(u, x, h)
    back = alpha_normal_comb(comb_derivative(v, x, var(h)))
    if back != alpha_normal_comb(u):
        raise SymmetryViolation((back - alpha_normal_comb(u)).items()[0][0])
    return v


def symmetrize(u: RComb, x: str, h: str = "h") -> RComb:
    """Average every term linear in h over the positions of x and h."""
    _check_linear_in(u, h)
    pairs = []
    for t, c in u.items():
        full = subst(t, var(x), h)
        d = deg(t, x)
        for s, e in comb_derivative(full, x, var(h)).items():
            pairs.append((s, c * e / (d + 1)))
    return alpha_normal_comb(LinComb(pairs, u.mode))


def euler_check(t: RTerm, x: str) -> bool:
    """∂t/∂x · x = deg_x(t) · t."""
    lhs = alpha_normal_comb(derivative(t, x, var(x)))
    return lhs == alpha_normal_comb(single(t).scale(deg(t, x)))
