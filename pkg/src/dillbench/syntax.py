"""Proof trees, cuts, simple proof-structures and nets.

A box content is a scope of its own: variables bound inside the content are
private to it, while its free variables belong to the surrounding net and
count in the variable set of the box tree.
"""

import logging
import re
from collections import defaultdict
from collections.abc import Callable, Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING, Any, Optional

from .algebra import LinComb, SemiringMode, canonical_key
from .errors import DisjointnessError, NotLinear, ParseError

if TYPE_CHECKING:
    from .typecheck import LType

logger = logging.getLogger(__name__)


KEYWORDS = frozenset({"tens", "par", "w", "cw", "d", "cd", "c", "cc", "box"})


def _check_disjoint(parts: Iterable[frozenset["Var"]], where: object) -> frozenset["Var"]:
    seen: set[Var] = set()
    for vs in parts:
        clash = seen & vs
        if clash:
            names = ", ".join(sorted(str(v) for v in clash))
            raise DisjointnessError(f"variable {names} occurs twice in {where}")
        seen |= vs
    return frozenset(seen)


class Tree:
    """Base class of proof trees."""

    @property
    def children(self) -> tuple["Tree", ...]:
        return ()

    def rebuild(self, children: tuple["Tree", ...]) -> "Tree":
        return self

    @cached_property
    def variables(self) -> frozenset["Var"]:
        return _check_disjoint((c.variables for c in self.children), self)

    @cached_property
    def _key(self) -> tuple:
        return (type(self).__name__, tuple(c.sort_key() for c in self.children))

    def sort_key(self) -> tuple:
        return self._key

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def __str__(self) -> str:
        from .parser import print_tree

        return print_tree(self)


@dataclass(frozen=True)
class Var(Tree):
    """Variable x, or its dual ~x when ``co`` is set."""

    base: str
    co: bool = False

    def dual(self) -> "Var":
        return Var(self.base, not self.co)

    @cached_property
    def variables(self) -> frozenset["Var"]:
        return frozenset((self,))

    @cached_property
    def _key(self) -> tuple:
        return ("Var", self.base, self.co)

    def size(self) -> int:
        return 0


@dataclass(frozen=True)
class Binary(Tree):
    left: Tree
    right: Tree

    def __post_init__(self) -> None:
        _ = self.variables

    @property
    def children(self) -> tuple[Tree, ...]:
        return (self.left, self.right)

    def rebuild(self, children: tuple[Tree, ...]) -> Tree:
        return type(self)(*children)


class Tens(Binary):
    pass


class Par(Binary):
    pass


class Contr(Binary):
    """Contraction c(s, t)."""


class Cocontr(Binary):
    """Cocontraction cc(s, t)."""


@dataclass(frozen=True)
class Unary(Tree):
    sub: Tree

    @property
    def children(self) -> tuple[Tree, ...]:
        return (self.sub,)

    def rebuild(self, children: tuple[Tree, ...]) -> Tree:
        return type(self)(children[0])


class Der(Unary):
    pass


class Coder(Unary):
    pass


@dataclass(frozen=True)
class Weak(Tree):
    ann: Optional["LType"] = field(default=None, compare=False)


@dataclass(frozen=True)
class Coweak(Tree):
    ann: Optional["LType"] = field(default=None, compare=False)


@dataclass(frozen=True)
class Box(Tree):
    """Promotion box of the given arity; ``content`` has width arity + 1."""

    arity: int
    content: "Net"
    args: tuple[Tree, ...]
    ann: Optional["LType"] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))
        if len(self.args) != self.arity:
            raise ParseError(f"box of arity {self.arity} has {len(self.args)} arguments")
        if self.content.width != self.arity + 1:
            raise ParseError(
                f"box of arity {self.arity} needs content of width {self.arity + 1}, "
                f"got {self.content.width}"
            )
        _ = self.variables

    @property
    def children(self) -> tuple[Tree, ...]:
        return self.args

    def rebuild(self, children: tuple[Tree, ...]) -> Tree:
        return Box(self.arity, self.content, tuple(children), self.ann)

    def with_content(self, content: "Net") -> "Box":
        return Box(self.arity, content, self.args, self.ann)

    @cached_property
    def variables(self) -> frozenset[Var]:
        parts = [a.variables for a in self.args]
        parts.append(self.content.free_variables)
        return _check_disjoint(parts, self)

    @cached_property
    def _key(self) -> tuple:
        return ("Box", self.arity, self.content.sort_key(), tuple(a.sort_key() for a in self.args))

    def size(self) -> int:
        inner = max((p.size() for p, _ in self.content.sum), default=0)
        return 1 + inner + sum(a.size() for a in self.args)


@dataclass(frozen=True)
class Cut:
    """Cut ⟨left|right⟩; the two sides are kept in canonical order."""

    left: Tree
    right: Tree

    def __post_init__(self) -> None:
        if canonical_key(self.right) < canonical_key(self.left):
            left, right = self.right, self.left
            object.__setattr__(self, "left", left)
            object.__setattr__(self, "right", right)
        _ = self.variables

    @cached_property
    def variables(self) -> frozenset[Var]:
        return _check_disjoint((self.left.variables, self.right.variables), self)

    @property
    def sides(self) -> tuple[Tree, Tree]:
        return (self.left, self.right)

    def sort_key(self) -> tuple:
        return (self.left.sort_key(), self.right.sort_key())

    def __str__(self) -> str:
        return f"<{self.left}|{self.right}>"


def _bound(variables: frozenset[Var]) -> frozenset[Var]:
    return frozenset(v for v in variables if v.dual() in variables)


@dataclass(frozen=True)
class SimpleNet:
    """Simple proof-structure (trees ; cuts); cuts form a multiset."""

    trees: tuple[Tree, ...]
    cuts: tuple[Cut, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "trees", tuple(self.trees))
        object.__setattr__(self, "cuts", tuple(sorted(self.cuts, key=canonical_key)))
        _ = self.variables

    @property
    def width(self) -> int:
        return len(self.trees)

    @cached_property
    def variables(self) -> frozenset[Var]:
        parts = [t.variables for t in self.trees] + [c.variables for c in self.cuts]
        return _check_disjoint(parts, "simple net")

    @cached_property
    def bound_variables(self) -> frozenset[Var]:
        return _bound(self.variables)

    @cached_property
    def free_variables(self) -> frozenset[Var]:
        return self.variables - self.bound_variables

    @cached_property
    def _key(self) -> tuple:
        return (tuple(t.sort_key() for t in self.trees), tuple(c.sort_key() for c in self.cuts))

    def sort_key(self) -> tuple:
        return self._key

    def size(self) -> int:
        return sum(t.size() for t in self.trees) + sum(
            1 + c.left.size() + c.right.size() for c in self.cuts
        )

    def items(self) -> tuple:
        """Trees followed by cuts, the unit of connectivity and splitting."""
        return (*self.trees, *self.cuts)

    def __str__(self) -> str:
        from .parser import print_simple

        return print_simple(self)


@dataclass(frozen=True)
class Net:
    """Formal linear combination of simple nets of a common width."""

    width: int
    sum: LinComb[SimpleNet]

    def __post_init__(self) -> None:
        for p, _ in self.sum:
            if p.width != self.width:
                raise ParseError(f"simple net of width {p.width} in a net of width {self.width}")

    @classmethod
    def simple(cls, p: SimpleNet, coeff: Any = 1, mode: SemiringMode = SemiringMode.RAT) -> "Net":
        return cls(p.width, LinComb.single(p, coeff, mode))

    @classmethod
    def zero(cls, width: int, mode: SemiringMode = SemiringMode.RAT) -> "Net":
        return cls(width, LinComb.zero(mode))

    @classmethod
    def of(cls, width: int, pairs: Iterable[tuple[SimpleNet, Any]],
           mode: SemiringMode = SemiringMode.RAT) -> "Net":
        return cls(width, LinComb(pairs, mode))

    @property
    def mode(self) -> SemiringMode:
        return self.sum.mode

    def __iter__(self) -> Iterator[tuple[SimpleNet, Any]]:
        return iter(self.sum)

    def __len__(self) -> int:
        return len(self.sum)

    def support(self) -> tuple[SimpleNet, ...]:
        return self.sum.terms()

    def is_zero(self) -> bool:
        return not self.sum

    def is_simple(self) -> bool:
        return len(self.sum) == 1 and self.sum.items()[0][1] == 1

    def __add__(self, other: "Net") -> "Net":
        if other.width != self.width:
            raise ParseError(f"cannot add nets of widths {self.width} and {other.width}")
        return Net(self.width, self.sum + other.sum)

    def scale(self, c: Any) -> "Net":
        return Net(self.width, self.sum.scale(c))

    def with_mode(self, mode: SemiringMode) -> "Net":
        return Net(self.width, self.sum.with_mode(mode))

    @cached_property
    def free_variables(self) -> frozenset[Var]:
        out: frozenset[Var] = frozenset()
        for p, _ in self.sum:
            out |= p.free_variables
        return out

    def sort_key(self) -> tuple:
        return (self.width, self.sum.sort_key())

    def __str__(self) -> str:
        from .parser import print_net

        return print_net(self)


def vars_of(x: Tree | SimpleNet) -> tuple[frozenset[Var], frozenset[Var]]:
    """(free, bound) variables: x is bound iff both x and ~x occur."""
    bound = _bound(x.variables)
    return x.variables - bound, bound


# Traversal and rebuilding


def map_vars(t: Tree, f: Callable[[Var], Tree]) -> Tree:
    """Replace every variable occurrence at this scope, including free ones of box contents."""
    if isinstance(t, Var):
        return f(t)
    if isinstance(t, Box):
        content = map_net_free(t.content, f)
        return Box(t.arity, content, tuple(map_vars(a, f) for a in t.args), t.ann)
    if not t.children:
        return t
    return t.rebuild(tuple(map_vars(c, f) for c in t.children))


def map_simple_free(p: SimpleNet, f: Callable[[Var], Tree]) -> SimpleNet:
    """Apply ``f`` to the free variables of ``p`` only."""
    free = p.free_variables

    def g(v: Var) -> Tree:
        return f(v) if v in free else v

    return map_simple(p, g)


def map_net_free(net: Net, f: Callable[[Var], Tree]) -> Net:
    return Net(net.width, net.sum.map_terms(lambda q: map_simple_free(q, f)))


def map_simple(p: SimpleNet, f: Callable[[Var], Tree]) -> SimpleNet:
    return SimpleNet(
        tuple(map_vars(t, f) for t in p.trees),
        tuple(Cut(map_vars(c.left, f), map_vars(c.right, f)) for c in p.cuts),
    )


def rename(p: SimpleNet, mapping: Mapping[Var, Var]) -> SimpleNet:
    return map_simple(p, lambda v: mapping.get(v, v))


def subtrees(t: Tree) -> Iterator[tuple[tuple[int, ...], Tree]]:
    """Pre-order walk yielding (path, subtree); does not enter box contents."""
    yield (), t
    for i, c in enumerate(t.children):
        for path, s in subtrees(c):
            yield (i, *path), s


def subtree_at(t: Tree, path: tuple[int, ...]) -> Tree:
    for i in path:
        t = t.children[i]
    return t


def replace_at(t: Tree, path: tuple[int, ...], new: Tree) -> Tree:
    if not path:
        return new
    i, *rest = path
    children = list(t.children)
    children[i] = replace_at(children[i], tuple(rest), new)
    return t.rebuild(tuple(children))


def tree_substitute(p: SimpleNet, s: Tree, x: Var) -> SimpleNet:
    """Replace the unique occurrence of ~x in p by s."""
    target = x.dual()
    if target not in p.variables:
        raise NotLinear(f"{target} does not occur in the net")
    return map_simple(p, lambda v: s if v == target else v)


# Names


_NAME = re.compile(r"^([a-z]+?)(\d+)$")


def all_names(x: Tree | SimpleNet | Net) -> set[str]:
    """Every variable base name, box contents included."""
    names: set[str] = set()

    def walk_tree(t: Tree) -> None:
        if isinstance(t, Var):
            names.add(t.base)
            return
        if isinstance(t, Box):
            walk_net(t.content)
        for c in t.children:
            walk_tree(c)

    def walk_simple(p: SimpleNet) -> None:
        for t in p.trees:
            walk_tree(t)
        for c in p.cuts:
            walk_tree(c.left)
            walk_tree(c.right)

    def walk_net(n: Net) -> None:
        for q, _ in n.sum:
            walk_simple(q)

    if isinstance(x, Net):
        walk_net(x)
    elif isinstance(x, SimpleNet):
        walk_simple(x)
    else:
        walk_tree(x)
    return names


class FreshNames:
    """Deterministic source of fresh variables, passed explicitly through rewriting."""

    def __init__(self, prefix: str = "n", start: int = 0):
        self.prefix = prefix
        self.counter = start

    @classmethod
    def avoiding(cls, *things: Tree | SimpleNet | Net, prefix: str = "n") -> "FreshNames":
        top = -1
        for thing in things:
            for name in all_names(thing):
                m = _NAME.match(name)
                if m and m.group(1) == prefix:
                    top = max(top, int(m.group(2)))
        return cls(prefix, top + 1)

    def var(self) -> Var:
        v = Var(f"{self.prefix}{self.counter}")
        self.counter += 1
        return v

    def vars(self, n: int) -> tuple[Var, ...]:
        return tuple(self.var() for _ in range(n))


def freshen(p: SimpleNet, fresh: FreshNames) -> SimpleNet:
    """Rename the bound pairs of p to fresh names (used when splicing a box content)."""
    mapping: dict[Var, Var] = {}
    for v in sorted(p.bound_variables, key=canonical_key):
        if v.co or v in mapping:
            continue
        new = fresh.var()
        mapping[v] = new
        mapping[v.dual()] = new.dual()
    return rename(p, mapping)


# α-canonical forms


def _first_occurrences(trees: Iterable[Tree]) -> dict[str, int]:
    order: dict[str, int] = {}

    def walk(t: Tree) -> None:
        if isinstance(t, Var):
            order.setdefault(t.base, len(order))
        for c in t.children:
            walk(c)

    for t in trees:
        walk(t)
    return order


def _shape(t: Tree, bound: frozenset[str], positions: dict[str, int]) -> tuple:
    if isinstance(t, Var):
        if t.base in bound:
            return ("b", positions.get(t.base, -1))
        return ("f", t.base, t.co)
    if isinstance(t, Box):
        return ("Box", t.arity, t.content.sort_key(),
                tuple(_shape(a, bound, positions) for a in t.args))
    return (type(t).__name__, tuple(_shape(c, bound, positions) for c in t.children))


_MAX_LABELINGS = 1024


def _label(t: Tree, bound: frozenset[str], taken: set[str], mapping: dict[Var, Var], index: int) -> int:
    """Name the unnamed bound variables of t in traversal order; returns the next index."""
    if isinstance(t, Var):
        if t.base in bound and t not in mapping:
            while f"v{index}" in taken:
                index += 1
            new = Var(f"v{index}")
            mapping[t] = new
            mapping[t.dual()] = new.dual()
            index += 1
        return index
    for c in t.children:
        index = _label(c, bound, taken, mapping, index)
    return index


@dataclass
class _Labeling:
    """One branch of the search: names given so far and the cuts still to visit."""

    mapping: dict[Var, Var]
    index: int
    pending: tuple[Cut, ...] = ()
    signature: tuple = ()


def alpha_canonicalize(p: SimpleNet) -> SimpleNet:
    """Rename bound pairs to v0, v1, ... in traversal order; free names are kept.

    Trees are visited first, then cuts grouped by their name-free shape. Within
    a group every visiting order is tried and the one whose renamed cuts come
    out least is kept. Box contents are canonicalized first, in their own scope.
    """
    p = SimpleNet(tuple(_canon_tree(t) for t in p.trees),
                  tuple(Cut(_canon_tree(c.left), _canon_tree(c.right)) for c in p.cuts))
    bound = frozenset(v.base for v in p.bound_variables)
    positions = {b: i for b, i in _first_occurrences(p.trees).items() if b in bound}
    taken = {v.base for v in p.free_variables}

    def side_key(s: Tree) -> tuple:
        return canonical_key(_shape(s, bound, positions))

    def orders(c: Cut) -> list[tuple[Tree, Tree]]:
        kl, kr = side_key(c.left), side_key(c.right)
        if kl == kr:
            return [(c.left, c.right), (c.right, c.left)]
        return [(c.left, c.right) if kl < kr else (c.right, c.left)]

    groups: dict[tuple, list[Cut]] = defaultdict(list)
    for c in p.cuts:
        groups[tuple(sorted((side_key(c.left), side_key(c.right))))].append(c)

    mapping: dict[Var, Var] = {}
    index = 0
    for t in p.trees:
        index = _label(t, bound, taken, mapping, index)
    branches = [_Labeling(mapping, index)]

    for key in sorted(groups):
        for b in branches:
            b.pending = tuple(groups[key])
        for _ in groups[key]:
            grown: list[_Labeling] = []
            for b in branches:
                tried: set[Cut] = set()
                for k, c in enumerate(b.pending):
                    if c in tried:
                        continue
                    tried.add(c)
                    rest = b.pending[:k] + b.pending[k + 1:]
                    for first, second in orders(c):
                        m = dict(b.mapping)
                        i = _label(first, bound, taken, m, b.index)
                        i = _label(second, bound, taken, m, i)
                        renamed = rename(SimpleNet((), (Cut(first, second),)), m).cuts[0]
                        grown.append(_Labeling(m, i, rest, (*b.signature, canonical_key(renamed))))
            least = min(g.signature for g in grown)
            branches = [g for g in grown if g.signature == least]
            if len(branches) > _MAX_LABELINGS:
                logger.debug("keeping %d of %d equally ranked labelings", _MAX_LABELINGS, len(branches))
                branches = branches[:_MAX_LABELINGS]
    return rename(p, branches[0].mapping)


def _canon_tree(t: Tree) -> Tree:
    if isinstance(t, Box):
        content = canonical_net(t.content)
        return Box(t.arity, content, tuple(_canon_tree(a) for a in t.args), t.ann)
    if not t.children:
        return t
    return t.rebuild(tuple(_canon_tree(c) for c in t.children))


def canonical_net(net: Net) -> Net:
    return Net(net.width, net.sum.map_terms(alpha_canonicalize))


def alpha_equivalent(a: Net, b: Net) -> bool:
    return a.width == b.width and canonical_net(a).sum == canonical_net(b).sum
