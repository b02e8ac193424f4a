"""Cut elimination on nets.

Cut redexes rewrite one cut of a simple net; commutative redexes rewrite a
box tree whose argument at some port is a box, a coweakening, a
cocontraction or a codereliction. Steps act on one element of the support of
a net and distribute over the resulting sum.
"""

import logging
import random
from collections.abc import Iterator
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction
from typing import Optional

from .algebra import LinComb
from .errors import FuelExhausted, NotARedex, SideConditionBlocked
from .syntax import (
    Box,
    Cocontr,
    Coder,
    Contr,
    Coweak,
    Cut,
    Der,
    FreshNames,
    Net,
    Par,
    SimpleNet,
    Tens,
    Tree,
    Var,
    Weak,
    freshen,
    replace_at,
    subtree_at,
    subtrees,
    tree_substitute,
)

logger = logging.getLogger(__name__)


class RuleId(StrEnum):
    AX = "ax"
    TENS_PAR = "tens-par"
    W_CW = "w-cw"
    D_CW = "d-cw"
    W_CD = "w-cd"
    C_CW = "c-cw"
    W_CC = "w-cc"
    D_CD = "d-cd"
    C_CD = "c-cd"
    D_CC = "d-cc"
    C_CC = "c-cc"
    BOX_W = "box-w"
    BOX_D = "box-d"
    BOX_C = "box-c"
    COM_BOX = "com-box"
    COM_CW = "com-cw"
    COM_CC = "com-cc"
    CHAIN = "chain"


COMMUTATIVE = frozenset({RuleId.COM_BOX, RuleId.COM_CW, RuleId.COM_CC, RuleId.CHAIN})


@dataclass(frozen=True)
class Site:
    """Where a redex sits in a simple net.

    ``kind`` is ``cut`` (cut ``index``) or ``tree``: the subtree at ``path`` of
    tree ``index``, or of side ``side`` of cut ``index`` when ``side`` is set.
    ``port`` is the box argument of a commutative redex. ``inside`` descends
    into element ``j`` of the content of the box found at this site.
    """

    kind: str
    index: int
    side: Optional[int] = None
    path: tuple[int, ...] = ()
    port: Optional[int] = None
    inside: Optional[tuple[int, "Site"]] = None

    def __str__(self) -> str:
        if self.kind == "cut" and self.side is None:
            text = f"cut{self.index}"
        else:
            where = f"cut{self.index}.{'lr'[self.side]}" if self.side is not None else f"tree{self.index}"
            text = f"{where}/{'.'.join(map(str, self.path))}"
            if self.port is not None:
                text += f"#{self.port}"
        if self.inside is not None:
            j, inner = self.inside
            text += f"@box{j}:{inner}"
        return text

    def depth(self) -> int:
        return 0 if self.inside is None else 1 + self.inside[1].depth()

    def position(self) -> tuple:
        """Order of sites within one box level: cuts, then trees, then cut sides,
        each by index and pre-order path."""
        key: tuple = (
            self.kind != "cut",
            self.side is not None,
            self.index,
            -1 if self.side is None else self.side,
            self.path,
            -1 if self.port is None else self.port,
        )
        if self.inside is not None:
            j, inner = self.inside
            key += (j, inner.position())
        return key


@dataclass(frozen=True)
class Redex:
    target: int
    site: Site
    rule: RuleId


@dataclass(frozen=True)
class Strategy:
    kind: str = "leftmost-innermost"  # leftmost-innermost | random | single
    seed: Optional[int] = None
    rules: frozenset[RuleId] = frozenset()
    reduce_inside_boxes: bool = False

    def __post_init__(self) -> None:
        if self.kind not in ("leftmost-innermost", "random", "single"):
            raise ValueError(f"unknown strategy {self.kind!r}")
        if self.kind == "random" and self.seed is None:
            raise ValueError("the random strategy needs a seed")

    def choose(self, redexes: list[Redex], rng: random.Random) -> Redex:
        """First support element, deepest box level, then the least ``Site.position``."""
        if self.kind == "random":
            return rng.choice(redexes)
        first = min(r.target for r in redexes)
        same = [r for r in redexes if r.target == first]
        return min(same, key=lambda r: (-r.site.depth(), r.site.position()))


@dataclass(frozen=True)
class Fragment:
    """Right-hand side of a cut rule: cuts replacing the redex, and for the
    axiom rule the substitution of ``substitution[1]`` for ``substitution[0]``."""

    net: Net
    substitution: Optional[tuple[Var, Tree]] = None


def _cuts(*pairs: tuple[Tree, Tree]) -> SimpleNet:
    return SimpleNet((), tuple(Cut(a, b) for a, b in pairs))


def _fragment(*summands: tuple[Fraction | int, SimpleNet]) -> Fragment:
    return Fragment(Net(0, LinComb((q, c) for c, q in summands)))


# Rule matching


def _oriented(c: Cut) -> Iterator[tuple[Tree, Tree]]:
    yield c.left, c.right
    if c.left != c.right:
        yield c.right, c.left


def _cut_rule(c: Cut, p: SimpleNet | None = None) -> RuleId | None:
    for a, b in _oriented(c):
        if isinstance(a, Var):
            if p is not None and a.dual() not in p.variables:
                continue
            if a.dual() in b.variables:
                continue
            return RuleId.AX
        match a, b:
            case Par(), Tens():
                return RuleId.TENS_PAR
            case Weak(), Coweak():
                return RuleId.W_CW
            case Der(), Coweak():
                return RuleId.D_CW
            case Weak(), Coder():
                return RuleId.W_CD
            case Contr(), Coweak():
                return RuleId.C_CW
            case Weak(), Cocontr():
                return RuleId.W_CC
            case Der(), Coder():
                return RuleId.D_CD
            case Contr(), Coder():
                return RuleId.C_CD
            case Der(), Cocontr():
                return RuleId.D_CC
            case Contr(), Cocontr():
                return RuleId.C_CC
            case Box(), Weak():
                return RuleId.BOX_W
            case Box(), Der():
                return RuleId.BOX_D
            case Box(), Contr():
                return RuleId.BOX_C if not _content_free(a) else None
    return None


def _content_free(box: Box) -> bool:
    return bool(box.content.free_variables)


def _port_rule(box: Box, port: int) -> RuleId | None:
    match box.args[port]:
        case Box():
            return RuleId.COM_BOX
        case Coweak():
            return RuleId.COM_CW
        case Cocontr():
            return RuleId.COM_CC
        case Coder():
            return None if _content_free(box) else RuleId.CHAIN
    return None


# Cut rules


def basic_cut_step(c: Cut, fresh: FreshNames, p: SimpleNet | None = None) -> Fragment:
    """Right-hand side of an axiom, multiplicative or exponential cut.

    With p given, an axiom side whose dual lies outside p is a free wire and is
    never the one substituted away.
    """
    for a, b in _oriented(c):
        if isinstance(a, Var):
            if p is not None and a.dual() not in p.variables:
                continue
            if a.dual() in b.variables:
                continue
            return Fragment(Net.simple(SimpleNet(())), (a, b))
        match a, b:
            case Par(s1, s2), Tens(t1, t2):
                return _fragment((1, _cuts((s1, t1), (s2, t2))))
            case Weak(), Coweak():
                return _fragment((1, SimpleNet(())))
            case (Der(), Coweak()) | (Weak(), Coder()):
                return _fragment()
            case Contr(s1, s2), Coweak():
                return _fragment((1, _cuts((s1, b), (s2, b))))
            case Weak(), Cocontr(t1, t2):
                return _fragment((1, _cuts((a, t1), (a, t2))))
            case Der(s), Coder(t):
                return _fragment((1, _cuts((s, t))))
            case Contr(s1, s2), Coder():
                return _fragment(
                    (1, _cuts((s1, b), (s2, Coweak()))),
                    (1, _cuts((s1, Coweak()), (s2, b))),
                )
            case Der(), Cocontr(t1, t2):
                return _fragment(
                    (1, _cuts((a, t1), (Weak(), t2))),
                    (1, _cuts((Weak(), t1), (a, t2))),
                )
            case Contr(s1, s2), Cocontr(t1, t2):
                x11, x12, x21, x22 = fresh.vars(4)
                return _fragment((1, _cuts(
                    (s1, Cocontr(x11, x12)),
                    (s2, Cocontr(x21, x22)),
                    (Contr(x11.dual(), x21.dual()), t1),
                    (Contr(x12.dual(), x22.dual()), t2),
                )))
    if any(isinstance(s, Var) for s in c.sides):
        raise SideConditionBlocked(f"axiom cut {c} would close a cycle")
    raise NotARedex(f"{c} is not a basic redex")


def promotion_cut_step(c: Cut, fresh: FreshNames) -> Net:
    """Right-hand side (a width-0 net) of a cut between a box and w, d or c."""
    for a, b in _oriented(c):
        if not isinstance(a, Box):
            continue
        match b:
            case Weak():
                return Net.simple(_cuts(*((t, Weak()) for t in a.args)))
            case Der(s):
                pairs = []
                for q, coeff in a.content:
                    q = freshen(q, fresh)
                    links = [(si, ti) for si, ti in zip(q.trees, a.args)]
                    cuts = (*q.cuts, *(Cut(si, ti) for si, ti in links), Cut(q.trees[-1], s))
                    pairs.append((SimpleNet((), cuts), coeff))
                return Net(0, LinComb(pairs, a.content.mode))
            case Contr(s1, s2):
                if _content_free(a):
                    raise SideConditionBlocked(f"cannot duplicate {a}: its content has free variables")
                xs, ys = fresh.vars(a.arity), fresh.vars(a.arity)
                return Net.simple(_cuts(
                    (Box(a.arity, a.content, xs, a.ann), s1),
                    (Box(a.arity, a.content, ys, a.ann), s2),
                    *((t, Contr(x.dual(), y.dual())) for t, x, y in zip(a.args, xs, ys)),
                ))
    raise NotARedex(f"{c} is not a promotion redex")


# Commutative rules


def commutative_step(t: Box, port: int, fresh: FreshNames) -> Net:
    """Rewrite box t at argument ``port``; the result has width 1."""
    if not isinstance(t, Box) or not 0 <= port < t.arity:
        raise NotARedex(f"no box port {port} in {t}")
    arg = t.args[port]
    before, after = t.args[:port], t.args[port + 1:]
    mode = t.content.mode

    def rebuild(args: tuple[Tree, ...], per_element) -> Net:
        content = Net(len(args) + 1, LinComb(
            ((per_element(q), c) for q, c in t.content), mode))
        return Net.simple(SimpleNet((Box(len(args), content, args, t.ann),)))

    match arg:
        case Box(k, _, inner_args):
            def merge(q: SimpleNet) -> SimpleNet:
                xs = fresh.vars(k)
                trees = (*q.trees[:port], *(x.dual() for x in xs), *q.trees[port + 1:])
                inner = Box(k, arg.content, xs, arg.ann)
                return SimpleNet(trees, (*q.cuts, Cut(q.trees[port], inner)))

            return rebuild((*before, *inner_args, *after), merge)
        case Coweak():
            def erase(q: SimpleNet) -> SimpleNet:
                trees = (*q.trees[:port], *q.trees[port + 1:])
                return SimpleNet(trees, (*q.cuts, Cut(q.trees[port], arg)))

            return rebuild((*before, *after), erase)
        case Cocontr(u, v):
            def split(q: SimpleNet) -> SimpleNet:
                x, y = fresh.vars(2)
                trees = (*q.trees[:port], x.dual(), y.dual(), *q.trees[port + 1:])
                return SimpleNet(trees, (*q.cuts, Cut(q.trees[port], Cocontr(x, y))))

            return rebuild((*before, u, v, *after), split)
        case Coder():
            if _content_free(t):
                raise SideConditionBlocked(f"cannot duplicate {t}: its content has free variables")
            return _chain_rule(t, port, fresh)
    raise NotARedex(f"argument {port} of {t} does not commute")


def _chain_rule(t: Box, port: int, fresh: FreshNames) -> Net:
    pairs = []
    for q, coeff in t.content:
        q = freshen(q, fresh)
        xs = fresh.vars(t.arity)
        kept_args = tuple(Coweak() if j == port else x for j, x in enumerate(xs))
        kept = Box(t.arity, t.content, kept_args, t.ann)
        cuts = [*q.cuts, Cut(q.trees[port], t.args[port])]
        for j, (sj, tj) in enumerate(zip(q.trees, t.args)):
            if j != port:
                cuts.append(Cut(Contr(xs[j].dual(), sj), tj))
        tree = Cocontr(kept, Coder(q.trees[-1]))
        pairs.append((SimpleNet((tree,), tuple(cuts)), coeff))
    return Net(1, LinComb(pairs, t.content.mode))


# Locating and enumerating


def _tree_at(p: SimpleNet, site: Site) -> Tree:
    if site.side is None:
        root = p.trees[site.index]
    else:
        root = p.cuts[site.index].sides[site.side]
    return subtree_at(root, site.path)


def _put_tree(p: SimpleNet, site: Site, new: Tree) -> SimpleNet:
    if site.side is None:
        trees = list(p.trees)
        trees[site.index] = replace_at(trees[site.index], site.path, new)
        return SimpleNet(tuple(trees), p.cuts)
    cuts = list(p.cuts)
    sides = list(cuts[site.index].sides)
    sides[site.side] = replace_at(sides[site.side], site.path, new)
    cuts[site.index] = Cut(*sides)
    return SimpleNet(p.trees, tuple(cuts))


def _locations(p: SimpleNet) -> Iterator[tuple[Site, Tree]]:
    """Every subtree position of p, trees first, then both sides of each cut."""
    for i, t in enumerate(p.trees):
        for path, s in subtrees(t):
            yield Site("tree", i, None, path), s
    for k, c in enumerate(p.cuts):
        for side, root in enumerate(c.sides):
            for path, s in subtrees(root):
                yield Site("tree", k, side, path), s


def _simple_redexes(p: SimpleNet, inside_boxes: bool) -> Iterator[tuple[Site, RuleId]]:
    for k, c in enumerate(p.cuts):
        rule = _cut_rule(c, p)
        if rule is not None:
            yield Site("cut", k), rule
    for site, t in _locations(p):
        if not isinstance(t, Box):
            continue
        for port in range(t.arity):
            rule = _port_rule(t, port)
            if rule is not None:
                yield Site(site.kind, site.index, site.side, site.path, port), rule
        if inside_boxes:
            for j, (q, _) in enumerate(t.content):
                for inner, rule in _simple_redexes(q, True):
                    yield Site(site.kind, site.index, site.side, site.path, None, (j, inner)), rule


def find_redexes(net: Net, strategy: Strategy = Strategy()) -> list[Redex]:
    out = []
    for target, (p, _) in enumerate(net):
        for site, rule in _simple_redexes(p, strategy.reduce_inside_boxes):
            if strategy.kind == "single" and rule not in strategy.rules:
                continue
            out.append(Redex(target, site, rule))
    return out


def redex_text(net: Net, r: Redex) -> str:
    """The redex as printed in traces."""
    p = net.support()[r.target]
    site = r.site
    while site.inside is not None:
        j, inner = site.inside
        p = _tree_at(p, site).content.support()[j]
        site = inner
    if site.kind == "cut" and site.side is None:
        return str(p.cuts[site.index])
    return str(_tree_at(p, site))


# Stepping


def _step_simple(p: SimpleNet, site: Site, fresh: FreshNames) -> Net:
    if site.inside is not None:
        box = _tree_at(p, site)
        j, inner = site.inside
        content = box.content
        q, kappa = content.sum.items()[j]
        rest = LinComb([(s, c) for i, (s, c) in enumerate(content.sum.items()) if i != j], content.mode)
        new = rest + _step_simple(q, inner, fresh).sum.scale(kappa)
        return Net.simple(_put_tree(p, site, box.with_content(Net(content.width, new))), mode=content.mode)
    if site.kind == "cut" and site.side is None:
        c = p.cuts[site.index]
        others = p.cuts[:site.index] + p.cuts[site.index + 1:]
        if any(isinstance(s, Box) for s in c.sides) and not any(isinstance(s, Var) for s in c.sides):
            rhs = promotion_cut_step(c, fresh)
            subst = None
        else:
            frag = basic_cut_step(c, fresh, p)
            rhs, subst = frag.net, frag.substitution
        pairs = []
        for q, coeff in rhs:
            new = SimpleNet(p.trees, (*others, *q.cuts))
            if subst is not None:
                x, s = subst
                new = tree_substitute(new, s, x)
            pairs.append((new, coeff))
        return Net(p.width, LinComb(pairs))
    if site.port is None:
        raise NotARedex(f"no commutative port at {site}")
    box = _tree_at(p, site)
    rhs = commutative_step(box, site.port, fresh)
    pairs = []
    for q, coeff in rhs:
        new = _put_tree(p, site, q.trees[0])
        pairs.append((SimpleNet(new.trees, (*new.cuts, *q.cuts)), coeff))
    return Net(p.width, LinComb(pairs))


def step(net: Net, r: Redex) -> Net:
    """Contract r, leaving the other elements of the support untouched."""
    items = net.sum.items()
    if not 0 <= r.target < len(items):
        raise NotARedex(f"no element {r.target} in the support")
    p, mu = items[r.target]
    fresh = FreshNames.avoiding(net)
    rhs = _step_simple(p, r.site, fresh)
    rest = LinComb([(q, c) for i, (q, c) in enumerate(items) if i != r.target], net.mode)
    return Net(net.width, rest + rhs.sum.with_mode(net.mode).scale(mu))


def trace(net: Net, fuel: int = 10000, strategy: Strategy = Strategy()) -> tuple[Net, list[str]]:
    """Normalize, recording one ``#k RULE @site : redex`` line per step."""
    lines: list[str] = []
    rng = random.Random(strategy.seed)
    for k in range(fuel + 1):
        redexes = find_redexes(net, strategy)
        if not redexes:
            logger.debug("normal form after %d steps", k)
            return net, lines
        if k == fuel:
            break
        r = strategy.choose(redexes, rng)
        lines.append(f"#{k + 1} {r.rule.upper()} @{r.site} : {redex_text(net, r)}")
        net = step(net, r)
    raise FuelExhausted(net, fuel)


def normalize(net: Net, fuel: int = 10000, strategy: Strategy = Strategy()) -> Net:
    return trace(net, fuel, strategy)[0]
