"""Derivations of logical judgments ⊢ p : Γ and bounded search for them.

A derivation is a tree of rule nodes. ``check_derivation`` computes the net
and the sequent a derivation proves; ``sequentialize`` searches bottom-up for
a derivation of a given net.
"""

import logging
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import islice
from typing import Any

from .algebra import LinComb, format_scalar
from .errors import BudgetExceeded, DillError, NotFound, RuleViolation
from .syntax import (
    Box,
    Cocontr,
    Coder,
    Contr,
    Coweak,
    Cut,
    Der,
    Net,
    Par,
    SimpleNet,
    Tens,
    Tree,
    Var,
    Weak,
)
from .typecheck import Excl, LType, ParType, Quest, TensType, dual, typecheck_net, typecheck_tree

logger = logging.getLogger(__name__)


class Derivation:
    """Base class of rule nodes."""

    @property
    def premises(self) -> tuple["Derivation", ...]:
        return ()

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)


@dataclass(frozen=True)
class Ax(Derivation):
    """⊢ (x, ~x ;) : A, A⊥"""

    var: str
    type: LType


@dataclass(frozen=True)
class Perm(Derivation):
    """Conclusion i is conclusion ``perm[i]`` of the premise."""

    perm: tuple[int, ...]
    premise: Derivation

    @property
    def premises(self) -> tuple[Derivation, ...]:
        return (self.premise,)


@dataclass(frozen=True)
class CutRule(Derivation):
    """Cuts the last conclusions of both premises."""

    left: Derivation
    right: Derivation

    @property
    def premises(self) -> tuple[Derivation, ...]:
        return (self.left, self.right)


@dataclass(frozen=True)
class ParRule(Derivation):
    premise: Derivation

    @property
    def premises(self) -> tuple[Derivation, ...]:
        return (self.premise,)


@dataclass(frozen=True)
class TensRule(Derivation):
    left: Derivation
    right: Derivation

    @property
    def premises(self) -> tuple[Derivation, ...]:
        return (self.left, self.right)


@dataclass(frozen=True)
class Mix(Derivation):
    left: Derivation
    right: Derivation

    @property
    def premises(self) -> tuple[Derivation, ...]:
        return (self.left, self.right)


@dataclass(frozen=True)
class Empty(Derivation):
    """⊢ (;) : the empty sequent."""


@dataclass(frozen=True)
class Weakening(Derivation):
    """Adds ``w`` of type ?body."""

    body: LType
    premise: Derivation

    @property
    def premises(self) -> tuple[Derivation, ...]:
        return (self.premise,)


@dataclass(frozen=True)
class Coweakening(Derivation):
    """⊢ (cw ;) : !body"""

    body: LType


@dataclass(frozen=True)
class Dereliction(Derivation):
    premise: Derivation

    @property
    def premises(self) -> tuple[Derivation, ...]:
        return (self.premise,)


@dataclass(frozen=True)
class Codereliction(Derivation):
    premise: Derivation

    @property
    def premises(self) -> tuple[Derivation, ...]:
        return (self.premise,)


@dataclass(frozen=True)
class Contraction(Derivation):
    premise: Derivation

    @property
    def premises(self) -> tuple[Derivation, ...]:
        return (self.premise,)


@dataclass(frozen=True)
class Cocontraction(Derivation):
    left: Derivation
    right: Derivation

    @property
    def premises(self) -> tuple[Derivation, ...]:
        return (self.left, self.right)


@dataclass(frozen=True)
class SumRule(Derivation):
    """Σ μ_i p_i from derivations of the p_i, all with conclusions ``types``."""

    types: tuple[LType, ...]
    coeffs: tuple[Fraction, ...]
    parts: tuple[Derivation, ...]

    @property
    def premises(self) -> tuple[Derivation, ...]:
        return self.parts


@dataclass(frozen=True)
class Prom(Derivation):
    """Promotion: content proves ?A1⊥, ..., ?An⊥, B; argument i ends with !Ai."""

    content: Derivation
    args: tuple[Derivation, ...] = ()

    @property
    def premises(self) -> tuple[Derivation, ...]:
        return (self.content, *self.args)


@dataclass
class Sequent:
    """What a derivation proves: Φ ⊢ net : types."""

    net: Net
    types: tuple[LType, ...]
    context: dict[Var, LType]

    @property
    def simple(self) -> SimpleNet:
        return self.net.support()[0]


# Checking


class DerivationChecker:
    """Computes conclusions bottom-up, memoized per checker."""

    def __init__(self) -> None:
        # keyed by id; the node is kept alive so its id is never reused
        self._memo: dict[int, tuple[Derivation, Sequent]] = {}

    def __call__(self, d: Derivation) -> Sequent:
        key = id(d)
        if key not in self._memo:
            try:
                self._memo[key] = (d, self._conclude(d))
            except RuleViolation:
                raise
            except DillError as e:
                raise RuleViolation(d, str(e)) from e
        return self._memo[key][1]

    def simple_premise(self, node: Derivation, d: Derivation) -> Sequent:
        s = self(d)
        if not s.net.is_simple():
            raise RuleViolation(node, "premise proves a sum, not a simple net")
        return s

    def _conclude(self, d: Derivation) -> Sequent:
        match d:
            case Ax(x, a):
                v = Var(x)
                p = SimpleNet((v, v.dual()))
                return Sequent(Net.simple(p), (a, dual(a)), {v: a, v.dual(): dual(a)})
            case Perm(perm, premise):
                s = self.simple_premise(d, premise)
                if sorted(perm) != list(range(len(s.types))):
                    raise RuleViolation(d, f"{perm} is not a permutation of {len(s.types)} conclusions")
                q = s.simple
                p = SimpleNet(tuple(q.trees[i] for i in perm), q.cuts)
                return Sequent(Net.simple(p), tuple(s.types[i] for i in perm), s.context)
            case CutRule(left, right):
                sl, sr = self.simple_premise(d, left), self.simple_premise(d, right)
                if not sl.types or not sr.types:
                    raise RuleViolation(d, "cut needs a conclusion on both sides")
                if sr.types[-1] != dual(sl.types[-1]):
                    raise RuleViolation(d, f"cut between {sl.types[-1]} and {sr.types[-1]}")
                pl, pr = sl.simple, sr.simple
                p = SimpleNet(
                    pl.trees[:-1] + pr.trees[:-1],
                    (*pl.cuts, *pr.cuts, Cut(pl.trees[-1], pr.trees[-1])),
                )
                ctx = _merge(d, sl.context, sr.context)
                return Sequent(Net.simple(p), sl.types[:-1] + sr.types[:-1], ctx)
            case ParRule(premise):
                s = self.simple_premise(d, premise)
                if len(s.types) < 2:
                    raise RuleViolation(d, "par needs two conclusions")
                q = s.simple
                p = SimpleNet((*q.trees[:-2], Par(q.trees[-2], q.trees[-1])), q.cuts)
                types = (*s.types[:-2], ParType(s.types[-2], s.types[-1]))
                return Sequent(Net.simple(p), types, s.context)
            case TensRule(left, right) | Cocontraction(left, right):
                sl, sr = self.simple_premise(d, left), self.simple_premise(d, right)
                if not sl.types or not sr.types:
                    raise RuleViolation(d, "needs a conclusion in both premises")
                a, b = sl.types[-1], sr.types[-1]
                if isinstance(d, TensRule):
                    top, ctor = TensType(a, b), Tens
                else:
                    if not isinstance(a, Excl) or a != b:
                        raise RuleViolation(d, f"cocontraction of {a} and {b}")
                    top, ctor = a, Cocontr
                pl, pr = sl.simple, sr.simple
                p = SimpleNet(
                    (*pl.trees[:-1], *pr.trees[:-1], ctor(pl.trees[-1], pr.trees[-1])),
                    (*pl.cuts, *pr.cuts),
                )
                types = (*sl.types[:-1], *sr.types[:-1], top)
                return Sequent(Net.simple(p), types, _merge(d, sl.context, sr.context))
            case Mix(left, right):
                sl, sr = self.simple_premise(d, left), self.simple_premise(d, right)
                pl, pr = sl.simple, sr.simple
                p = SimpleNet(pl.trees + pr.trees, (*pl.cuts, *pr.cuts))
                return Sequent(Net.simple(p), sl.types + sr.types, _merge(d, sl.context, sr.context))
            case Empty():
                return Sequent(Net.simple(SimpleNet(())), (), {})
            case Weakening(body, premise):
                s = self.simple_premise(d, premise)
                q = s.simple
                p = SimpleNet((*q.trees, Weak(Quest(body))), q.cuts)
                return Sequent(Net.simple(p), (*s.types, Quest(body)), s.context)
            case Coweakening(body):
                return Sequent(Net.simple(SimpleNet((Coweak(Excl(body)),))), (Excl(body),), {})
            case Dereliction(premise) | Codereliction(premise):
                s = self.simple_premise(d, premise)
                if not s.types:
                    raise RuleViolation(d, "needs a conclusion")
                q = s.simple
                ctor, shape = (Der, Quest) if isinstance(d, Dereliction) else (Coder, Excl)
                p = SimpleNet((*q.trees[:-1], ctor(q.trees[-1])), q.cuts)
                return Sequent(Net.simple(p), (*s.types[:-1], shape(s.types[-1])), s.context)
            case Contraction(premise):
                s = self.simple_premise(d, premise)
                if len(s.types) < 2 or s.types[-1] != s.types[-2] or not isinstance(s.types[-1], Quest):
                    raise RuleViolation(d, "contraction needs two equal ?-conclusions")
                q = s.simple
                p = SimpleNet((*q.trees[:-2], Contr(q.trees[-2], q.trees[-1])), q.cuts)
                return Sequent(Net.simple(p), s.types[:-1], s.context)
            case SumRule(types, coeffs, parts):
                if len(coeffs) != len(parts):
                    raise RuleViolation(d, "one coefficient per premise")
                pairs = []
                ctx: dict[Var, LType] = {}
                for c, part in zip(coeffs, parts):
                    s = self.simple_premise(d, part)
                    if s.types != tuple(types):
                        raise RuleViolation(d, "premises of a sum prove different sequents")
                    ctx = _merge(d, ctx, s.context)
                    pairs.append((s.simple, c))
                return Sequent(Net(len(types), LinComb(pairs)), tuple(types), ctx)
            case Prom(content, args):
                sc = self(content)
                n = len(args)
                if len(sc.types) != n + 1:
                    raise RuleViolation(d, f"content has {len(sc.types)} conclusions for {n} arguments")
                trees: list[Tree] = []
                cuts: list[Cut] = []
                roots: list[Tree] = []
                ctx = {}
                for i, arg in enumerate(args):
                    s = self.simple_premise(d, arg)
                    expected = sc.types[i]
                    if not s.types or not isinstance(expected, Quest) or s.types[-1] != Excl(dual(expected.body)):
                        raise RuleViolation(d, f"argument {i} does not match content conclusion {expected}")
                    q = s.simple
                    trees.extend(q.trees[:-1])
                    cuts.extend(q.cuts)
                    roots.append(q.trees[-1])
                    ctx = _merge(d, ctx, s.context)
                box_type = Excl(sc.types[-1])
                box = Box(n, sc.net, tuple(roots), box_type)
                p = SimpleNet((*trees, box), tuple(cuts))
                types = tuple(t for a in args for t in self(a).types[:-1]) + (box_type,)
                return Sequent(Net.simple(p), types, ctx)
        raise RuleViolation(d, "unknown rule")


def _merge(node: Derivation, *contexts: Mapping[Var, LType]) -> dict[Var, LType]:
    out: dict[Var, LType] = {}
    for ctx in contexts:
        for v, a in ctx.items():
            if v in out and out[v] != a:
                raise RuleViolation(node, f"variable {v} typed both {out[v]} and {a}")
            out[v] = a
    return out


def check_derivation(d: Derivation) -> tuple[Net, tuple[LType, ...], dict[Var, LType]]:
    """The net, sequent and context a derivation proves."""
    s = DerivationChecker()(d)
    return s.net, s.types, s.context


# Search


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def tick(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise BudgetExceeded(f"derivation search exceeded {self.limit} goals")


def _base_names(item: Tree | Cut) -> set[str]:
    return {v.base for v in item.variables}


def _groups(items: Sequence[Tree | Cut], roots: Sequence[Tree]) -> list[list[int]] | None:
    """Assign every item to the root it is connected to, or None when impossible."""
    n = len(items)
    parent = list(range(n + len(roots)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner: dict[str, int] = {}
    nodes = [*items, *roots]
    for i, node in enumerate(nodes):
        for name in _base_names(node):
            if name in owner:
                parent[find(i)] = find(owner[name])
            else:
                owner[name] = i
    root_classes = [find(n + j) for j in range(len(roots))]
    if len(set(root_classes)) != len(roots):
        return None
    groups: list[list[int]] = [[] for _ in roots]
    for i in range(n):
        c = find(i)
        if c not in root_classes:
            return None
        groups[root_classes.index(c)].append(i)
    return groups


def _components(items: Sequence[Tree | Cut]) -> list[list[int]]:
    parent = list(range(len(items)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner: dict[str, int] = {}
    for i, item in enumerate(items):
        for name in _base_names(item):
            if name in owner:
                parent[find(i)] = find(owner[name])
            else:
                owner[name] = i
    comps: dict[int, list[int]] = {}
    for i in range(len(items)):
        comps.setdefault(find(i), []).append(i)
    return sorted(comps.values())


def _arrange(d: Derivation, derived: Sequence[int]) -> Derivation:
    """Wrap d in a permutation so its conclusion i is original tree i."""
    perm = tuple(derived.index(j) for j in range(len(derived)))
    if perm == tuple(range(len(perm))):
        return d
    return Perm(perm, d)


class _Searcher:
    def __init__(self, context: Mapping[Var, LType], budget: _Budget):
        self.context = dict(context)
        self.budget = budget
        self.failed: set[tuple[SimpleNet, tuple[LType, ...]]] = set()

    def type_of(self, t: Tree) -> LType:
        return typecheck_tree(self.context, t)

    def net(self, net: Net, gamma: tuple[LType, ...]) -> Iterator[Derivation]:
        if net.is_simple():
            yield from self.simple(net.support()[0], gamma)
            return
        parts = []
        for p, _ in net:
            d = next(self.simple(p, gamma), None)
            if d is None:
                return
            parts.append(d)
        yield SumRule(gamma, tuple(c for _, c in net), tuple(parts))

    def simple(self, p: SimpleNet, gamma: tuple[LType, ...]) -> Iterator[Derivation]:
        key = (p, gamma)
        if key in self.failed:
            return
        self.budget.tick()
        found = False
        for d in self._rules(p, gamma):
            found = True
            yield d
        if not found:
            self.failed.add(key)

    def _sub(self, p: SimpleNet, picks: Sequence[int], extra: Sequence[Tree],
             gamma: tuple[LType, ...], extra_types: Sequence[LType]) -> tuple[SimpleNet, tuple]:
        """Sub-goal made of the picked items of p (tree indices first) plus extra trees."""
        n = p.width
        items = p.items()
        trees = [items[i] for i in picks if i < n] + list(extra)
        cuts = [items[i] for i in picks if i >= n]
        types = tuple(gamma[i] for i in picks if i < n) + tuple(extra_types)
        return SimpleNet(tuple(trees), tuple(cuts)), types

    def _rules(self, p: SimpleNet, gamma: tuple[LType, ...]) -> Iterator[Derivation]:
        n = p.width
        items = p.items()
        if not items:
            yield Empty()
            return
        comps = _components(items)
        if len(comps) > 1:
            first = comps[0]
            rest = sorted(i for c in comps[1:] for i in c)
            left, lt = self._sub(p, first, (), gamma, ())
            right, rt = self._sub(p, rest, (), gamma, ())
            derived = [i for i in first if i < n] + [i for i in rest if i < n]
            for dl in self.simple(left, lt):
                for dr in self.simple(right, rt):
                    yield _arrange(Mix(dl, dr), derived)
            return
        yield from self._terminal(p, gamma)
        others = list(range(len(items)))
        for i, t in enumerate(p.trees):
            rest = [j for j in others if j != i]
            derived = [j for j in rest if j < n] + [i]
            yield from self._unary(p, gamma, i, t, rest, derived)
        for i, t in enumerate(p.trees):
            rest = [j for j in others if j != i]
            yield from self._binary(p, gamma, i, t, rest)
        for k, c in enumerate(p.cuts):
            rest = [j for j in others if j != n + k]
            yield from self._cut(p, gamma, c, rest)

    def _terminal(self, p: SimpleNet, gamma: tuple[LType, ...]) -> Iterator[Derivation]:
        if p.cuts:
            return
        match p.trees:
            case (Var() as x, Var() as y) if y == x.dual():
                first = 0 if not x.co else 1
                v = p.trees[first]
                d = Ax(v.base, gamma[first])
                if gamma[1 - first] == dual(gamma[first]):
                    yield _arrange(d, [first, 1 - first])
            case (Coweak(),) if isinstance(gamma[0], Excl):
                yield Coweakening(gamma[0].body)

    def _unary(self, p, gamma, i, t, rest, derived) -> Iterator[Derivation]:
        a = gamma[i]
        match t:
            case Par(s, u) if isinstance(a, ParType):
                sub, types = self._sub(p, rest, (s, u), gamma, (a.left, a.right))
                for d in self.simple(sub, types):
                    yield _arrange(ParRule(d), derived)
            case Der(s) | Coder(s) if isinstance(a, Quest if isinstance(t, Der) else Excl):
                sub, types = self._sub(p, rest, (s,), gamma, (a.body,))
                rule = Dereliction if isinstance(t, Der) else Codereliction
                for d in self.simple(sub, types):
                    yield _arrange(rule(d), derived)
            case Contr(s, u) if isinstance(a, Quest):
                sub, types = self._sub(p, rest, (s, u), gamma, (a, a))
                for d in self.simple(sub, types):
                    yield _arrange(Contraction(d), derived)
            case Weak() if isinstance(a, Quest):
                sub, types = self._sub(p, rest, (), gamma, ())
                for d in self.simple(sub, types):
                    yield _arrange(Weakening(a.body, d), derived)

    def _split_goals(self, p, gamma, rest, roots, root_types):
        items = p.items()
        groups = _groups([items[j] for j in rest], roots)
        if groups is None:
            return None
        goals = []
        for group, root, a in zip(groups, roots, root_types):
            picks = [rest[j] for j in group]
            goals.append((picks, *self._sub(p, picks, (root,), gamma, (a,))))
        return goals

    def _pairs(self, goals) -> Iterator[list[Derivation]]:
        if not goals:
            yield []
            return
        _, sub, types = goals[0]
        for d in self.simple(sub, types):
            for tail in self._pairs(goals[1:]):
                yield [d, *tail]

    def _binary(self, p, gamma, i, t, rest) -> Iterator[Derivation]:
        n = p.width
        a = gamma[i]
        match t:
            case Tens(s, u) if isinstance(a, TensType):
                roots, types, rule = (s, u), (a.left, a.right), TensRule
            case Cocontr(s, u) if isinstance(a, Excl):
                roots, types, rule = (s, u), (a, a), Cocontraction
            case Box() if isinstance(a, Excl):
                yield from self._prom(p, gamma, i, t, rest)
                return
            case _:
                return
        goals = self._split_goals(p, gamma, rest, roots, types)
        if goals is None:
            return
        derived = [j for picks, _, _ in goals for j in picks if j < n] + [i]
        for dl, dr in self._pairs(goals):
            yield _arrange(rule(dl, dr), derived)

    def _prom(self, p, gamma, i, box: Box, rest) -> Iterator[Derivation]:
        n = p.width
        try:
            arg_types = [self.type_of(arg) for arg in box.args]
        except DillError:
            return
        if not all(isinstance(a, Excl) for a in arg_types):
            return
        goals = self._split_goals(p, gamma, rest, box.args, arg_types)
        if goals is None:
            return
        content_types = (*(Quest(dual(a.body)) for a in arg_types), gamma[i].body)
        try:
            inner = typecheck_net(None, box.content, content_types)
        except DillError:
            return
        searcher = _Searcher(inner.context, self.budget)
        derived = [j for picks, _, _ in goals for j in picks if j < n] + [i]
        for content in searcher.net(inner.net, content_types):
            for args in self._pairs(goals):
                yield _arrange(Prom(content, tuple(args)), derived)

    def _cut(self, p, gamma, c: Cut, rest) -> Iterator[Derivation]:
        n = p.width
        try:
            a = self.type_of(c.left)
        except DillError:
            return
        goals = self._split_goals(p, gamma, rest, (c.left, c.right), (a, dual(a)))
        if goals is None:
            return
        derived = [j for picks, _, _ in goals for j in picks if j < n]
        for dl, dr in self._pairs(goals):
            yield _arrange(CutRule(dl, dr), derived)


def derivations(
    net: Net,
    gamma: Sequence[LType],
    phi: Mapping[Var, LType] | None = None,
    limit: int = 8,
    budget: int = 20000,
) -> list[Derivation]:
    """Up to ``limit`` distinct derivations of phi ⊢ net : gamma."""
    typing = typecheck_net(phi, net, gamma)
    searcher = _Searcher(typing.context, _Budget(budget))
    seen: list[Derivation] = []
    for d in islice(searcher.net(typing.net, tuple(gamma)), limit * 4):
        if d not in seen:
            seen.append(d)
        if len(seen) >= limit:
            break
    return seen


def sequentialize(
    net: Net,
    gamma: Sequence[LType],
    phi: Mapping[Var, LType] | None = None,
    budget: int = 20000,
) -> Derivation:
    """A derivation of phi ⊢ net : gamma.

    Raises:
        NotFound: the search space was exhausted.
        BudgetExceeded: the search visited more than ``budget`` goals.
    """
    typing = typecheck_net(phi, net, gamma)
    b = _Budget(budget)
    d = next(_Searcher(typing.context, b).net(typing.net, tuple(gamma)), None)
    logger.debug("derivation search visited %d goals", b.used)
    if d is None:
        raise NotFound(f"no derivation of {net}")
    return d


# S-expressions


def derivation_to_sexp(d: Derivation) -> str:
    def ty(a: LType) -> str:
        return f'"{a}"'

    def go(d: Derivation) -> str:
        match d:
            case Ax(x, a):
                return f"(ax {x} {ty(a)})"
            case Perm(perm, premise):
                return f"(perm ({' '.join(map(str, perm))}) {go(premise)})"
            case Empty():
                return "(empty)"
            case Weakening(body, premise):
                return f"(weak {ty(body)} {go(premise)})"
            case Coweakening(body):
                return f"(coweak {ty(body)})"
            case SumRule(types, coeffs, parts):
                head = " ".join(ty(a) for a in types)
                body = " ".join(f"({format_scalar(Fraction(c))} {go(q)})" for c, q in zip(coeffs, parts))
                return f"(sum ({head}){' ' + body if body else ''})"
        name = _SEXP_NAMES[type(d)]
        return f"({name} {' '.join(go(q) for q in d.premises)})"

    return go(d)


_SEXP_NAMES: dict[type, str] = {
    CutRule: "cut",
    ParRule: "par",
    TensRule: "tens",
    Mix: "mix",
    Dereliction: "der",
    Codereliction: "coder",
    Contraction: "contr",
    Cocontraction: "cocontr",
    Prom: "prom",
}


def rule_counts(d: Derivation) -> dict[str, int]:
    """How often each rule occurs in d."""
    counts: dict[str, int] = {}
    stack: list[Any] = [d]
    while stack:
        node = stack.pop()
        counts[type(node).__name__] = counts.get(type(node).__name__, 0) + 1
        stack.extend(node.premises)
    return counts
