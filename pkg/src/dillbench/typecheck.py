"""Linear logic types, linear negation and the local typing judgment.

Unannotated weakenings, coweakenings and boxes get their types by unification
against the expected conclusion and cut types. Variables missing from the
context are inferred the same way unless ``strict`` is set.
"""

import logging
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property
from itertools import count

from .errors import AmbiguousType, CutTypeClash, TypeMismatch, UnboundVar, WidthMismatch
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

logger = logging.getLogger(__name__)


class LType:
    """Base class of types."""

    @cached_property
    def _key(self) -> tuple:
        return (type(self).__name__, *(
            c.sort_key() if isinstance(c, LType) else c for c in self._fields()
        ))

    def _fields(self) -> tuple:
        return ()

    def sort_key(self) -> tuple:
        return self._key

    def __str__(self) -> str:
        from .parser import print_type

        return print_type(self)


@dataclass(frozen=True)
class Atom(LType):
    name: str

    def _fields(self) -> tuple:
        return (self.name,)


@dataclass(frozen=True)
class CoAtom(LType):
    name: str

    def _fields(self) -> tuple:
        return (self.name,)


@dataclass(frozen=True)
class TensType(LType):
    left: LType
    right: LType

    def _fields(self) -> tuple:
        return (self.left, self.right)


@dataclass(frozen=True)
class ParType(LType):
    left: LType
    right: LType

    def _fields(self) -> tuple:
        return (self.left, self.right)


@dataclass(frozen=True)
class Excl(LType):
    """!A"""

    body: LType

    def _fields(self) -> tuple:
        return (self.body,)


@dataclass(frozen=True)
class Quest(LType):
    """?A"""

    body: LType

    def _fields(self) -> tuple:
        return (self.body,)


@dataclass(frozen=True)
class Meta(LType):
    """Type unknown during inference; ``negated`` stands for its dual."""

    ident: int
    negated: bool = False

    def _fields(self) -> tuple:
        return (self.ident, self.negated)


def dual(a: LType) -> LType:
    match a:
        case Atom(name):
            return CoAtom(name)
        case CoAtom(name):
            return Atom(name)
        case TensType(l, r):
            return ParType(dual(l), dual(r))
        case ParType(l, r):
            return TensType(dual(l), dual(r))
        case Excl(b):
            return Quest(dual(b))
        case Quest(b):
            return Excl(dual(b))
        case Meta(i, neg):
            return Meta(i, not neg)
    raise TypeError(f"not a type: {a!r}")


def metas(a: LType) -> Iterator[int]:
    match a:
        case Meta(i, _):
            yield i
        case TensType(l, r) | ParType(l, r):
            yield from metas(l)
            yield from metas(r)
        case Excl(b) | Quest(b):
            yield from metas(b)


def atoms(a: LType) -> set[str]:
    match a:
        case Atom(name) | CoAtom(name):
            return {name}
        case TensType(l, r) | ParType(l, r):
            return atoms(l) | atoms(r)
        case Excl(b) | Quest(b):
            return atoms(b)
    return set()


class Unifier:
    """Substitution on type metavariables."""

    def __init__(self) -> None:
        self.solution: dict[int, LType] = {}
        self._ids = count()

    def fresh(self) -> Meta:
        return Meta(next(self._ids))

    def walk(self, a: LType) -> LType:
        while isinstance(a, Meta) and a.ident in self.solution:
            s = self.solution[a.ident]
            a = dual(s) if a.negated else s
        return a

    def resolve(self, a: LType) -> LType:
        a = self.walk(a)
        match a:
            case TensType(l, r):
                return TensType(self.resolve(l), self.resolve(r))
            case ParType(l, r):
                return ParType(self.resolve(l), self.resolve(r))
            case Excl(b):
                return Excl(self.resolve(b))
            case Quest(b):
                return Quest(self.resolve(b))
        return a

    def unify(self, a: LType, b: LType, position: str) -> None:
        a, b = self.walk(a), self.walk(b)
        if a == b:
            return
        if isinstance(a, Meta):
            self._bind(a, b, position)
        elif isinstance(b, Meta):
            self._bind(b, a, position)
        elif isinstance(a, (TensType, ParType)) and type(a) is type(b):
            self.unify(a.left, b.left, position)
            self.unify(a.right, b.right, position)
        elif isinstance(a, (Excl, Quest)) and type(a) is type(b):
            self.unify(a.body, b.body, position)
        else:
            raise TypeMismatch(position, self.resolve(a), self.resolve(b))

    def _bind(self, m: Meta, a: LType, position: str) -> None:
        if m.negated:
            m, a = Meta(m.ident), dual(a)
        if m.ident in set(metas(self.resolve(a))):
            raise TypeMismatch(position, "a finite type", f"a cyclic constraint on {m}")
        self.solution[m.ident] = a


class _Scope:
    """Variable types of one simple net; box contents open a child scope."""

    def __init__(self, local: frozenset[Var] | None, parent: "_Scope | None" = None):
        self.local = local
        self.parent = parent
        self.types: dict[Var, LType] = {}

    def owner(self, v: Var) -> "_Scope":
        s = self
        while s.parent is not None and s.local is not None and v not in s.local:
            s = s.parent
        return s


@dataclass
class Typing:
    """Outcome of a successful net typing."""

    context: dict[Var, LType]
    conclusions: tuple[LType, ...]
    net: Net


class TypeChecker:
    def __init__(self, phi: Mapping[Var, LType] | None = None, strict: bool = False):
        self.u = Unifier()
        self.strict = strict
        self.top = _Scope(None)
        self.records: list[LType] = []
        for v, a in (phi or {}).items():
            if v.dual() in self.top.types:
                self.u.unify(self.top.types[v.dual()], dual(a), f"context entry {v}")
            self.top.types[v] = a

    def var_type(self, v: Var, scope: _Scope) -> LType:
        s = scope.owner(v)
        if v in s.types:
            return s.types[v]
        if v.dual() in s.types:
            s.types[v] = dual(s.types[v.dual()])
            return s.types[v]
        if self.strict and s is self.top:
            raise UnboundVar(f"variable {v} has no type in the context")
        m = self.u.fresh()
        s.types[v] = m
        return m

    def tree_type(self, t: Tree, scope: _Scope, where: str) -> LType:
        match t:
            case Var():
                return self.var_type(t, scope)
            case Tens(l, r):
                return TensType(self.tree_type(l, scope, where), self.tree_type(r, scope, where))
            case Par(l, r):
                return ParType(self.tree_type(l, scope, where), self.tree_type(r, scope, where))
            case Weak(ann) | Coweak(ann):
                shape = Quest if isinstance(t, Weak) else Excl
                a = shape(self.u.fresh())
                if ann is not None:
                    self.u.unify(a, ann, where)
                self.records.append(a)
                return a
            case Der(s):
                return Quest(self.tree_type(s, scope, where))
            case Coder(s):
                return Excl(self.tree_type(s, scope, where))
            case Contr(l, r) | Cocontr(l, r):
                shape = Quest if isinstance(t, Contr) else Excl
                a = self.tree_type(l, scope, where)
                self.u.unify(shape(self.u.fresh()), a, where)
                self.u.unify(a, self.tree_type(r, scope, where), where)
                return a
            case Box():
                return self.box_type(t, scope, where)
        raise TypeError(f"not a tree: {t!r}")

    def box_type(self, t: Box, scope: _Scope, where: str) -> LType:
        b = self.u.fresh()
        result = Excl(b)
        if t.ann is not None:
            self.u.unify(result, t.ann, where)
        self.records.append(result)
        premises = []
        for i, arg in enumerate(t.args):
            a = self.u.fresh()
            self.u.unify(Excl(a), self.tree_type(arg, scope, where), f"{where}, box argument {i}")
            premises.append(Quest(dual(a)))
        expected = (*premises, b)
        for q, _ in t.content:
            self.check_simple(q, expected, _Scope(q.bound_variables, scope), f"{where}, box content")
        return result

    def check_simple(self, p: SimpleNet, gamma: Sequence[LType], scope: _Scope, where: str) -> None:
        if p.width != len(gamma):
            raise WidthMismatch(f"{where}: net of width {p.width} against {len(gamma)} types")
        for i, (t, a) in enumerate(zip(p.trees, gamma)):
            pos = f"{where} tree {i}"
            self.u.unify(a, self.tree_type(t, scope, pos), pos)
        for k, c in enumerate(p.cuts):
            pos = f"{where} cut {k}"
            left = self.tree_type(c.left, scope, pos)
            right = self.tree_type(c.right, scope, pos)
            try:
                self.u.unify(left, dual(right), pos)
            except TypeMismatch as e:
                raise CutTypeClash(
                    f"{pos}: sides of {c} have types {self.u.resolve(left)} "
                    f"and {self.u.resolve(right)}"
                ) from e

    def resolved(self, a: LType, what: str) -> LType:
        r = self.u.resolve(a)
        if any(True for _ in metas(r)):
            raise AmbiguousType(f"cannot determine the type of {what}")
        return r


def _annotate_tree(t: Tree, anns: Iterator[LType]) -> Tree:
    match t:
        case Weak():
            return Weak(next(anns))
        case Coweak():
            return Coweak(next(anns))
        case Box():
            ann = next(anns)
            args = tuple(_annotate_tree(a, anns) for a in t.args)
            content = Net(
                t.content.width,
                type(t.content.sum)(
                    [(_annotate_simple(q, anns), c) for q, c in t.content.sum],
                    t.content.mode,
                ),
            )
            return Box(t.arity, content, args, ann)
        case Var():
            return t
    return t.rebuild(tuple(_annotate_tree(c, anns) for c in t.children))


def _annotate_simple(p: SimpleNet, anns: Iterator[LType]) -> SimpleNet:
    trees = tuple(_annotate_tree(t, anns) for t in p.trees)
    cuts = []
    for c in p.cuts:
        left = _annotate_tree(c.left, anns)
        cuts.append(Cut(left, _annotate_tree(c.right, anns)))
    return SimpleNet(trees, tuple(cuts))


def typecheck_tree(phi: Mapping[Var, LType], t: Tree, strict: bool = True) -> LType:
    """Type of t under phi."""
    checker = TypeChecker(phi, strict)
    a = checker.tree_type(t, checker.top, "tree")
    return checker.resolved(a, str(t))


def typecheck_net(
    phi: Mapping[Var, LType] | None,
    net: Net,
    gamma: Sequence[LType],
    strict: bool = False,
) -> Typing:
    """Check phi ⊢₀ P : Γ for every simple net of the support.

    Returns:
        The solved context, the conclusions and the net with every
        weakening, coweakening and box annotated with its type.
    """
    if net.width != len(gamma):
        raise WidthMismatch(f"net of width {net.width} against {len(gamma)} types")
    checker = TypeChecker(phi, strict)
    for p, _ in net:
        checker.check_simple(p, gamma, checker.top, "net")
    records = [checker.resolved(a, "a weakening, coweakening or box") for a in checker.records]
    anns = iter(records)
    annotated = Net(
        net.width,
        type(net.sum)([(_annotate_simple(p, anns), c) for p, c in net], net.mode),
    )
    context = {v: checker.resolved(a, f"variable {v}") for v, a in checker.top.types.items()}
    for v in list(context):
        context.setdefault(v.dual(), dual(context[v]))
    logger.debug("typed net of width %d with %d variables", net.width, len(context))
    return Typing(context, tuple(gamma), annotated)
