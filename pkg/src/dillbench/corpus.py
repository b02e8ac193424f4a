"""Seeded random corpora: derivable nets and terms of both calculi.

Nets are produced as random derivations, so every generated net has a
derivation by construction. The bundled corpus (``corpus/corpus.yaml``) lists
hand-written nets with the sequent and valuation to evaluate them at.
"""

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

import yaml
from pydantic import BaseModel, Field

from . import differential as dl
from . import resource as rc
from .algebra import LinComb, Multiset
from .config import Valuation
from .logic import (
    Ax,
    Codereliction,
    Cocontraction,
    Contraction,
    Coweakening,
    CutRule,
    Dereliction,
    Derivation,
    DerivationChecker,
    Mix,
    ParRule,
    Perm,
    Prom,
    TensRule,
    Weakening,
)
from .parser import parse_context, parse_net, parse_types
from .syntax import FreshNames, Net, Var
from .typecheck import Atom, CoAtom, Excl, LType, ParType, Quest, TensType, dual

logger = logging.getLogger(__name__)

CORPUS_PATH = Path(__file__).parent / "corpus" / "corpus.yaml"


class CorpusEntry(BaseModel):
    """A bundled net with the sequent it proves."""

    name: str
    net: str = Field(description="Net in the concrete syntax")
    types: str = Field(description="Comma separated conclusion types")
    context: Optional[str] = Field(default=None, description="JSON typing context of free variables")
    atoms: dict[str, list[str]] = Field(default_factory=lambda: {"a": ["p", "q"], "b": ["r"]})

    def parsed(self) -> tuple[Net, tuple[LType, ...], Optional[dict[Var, LType]]]:
        types = parse_types(self.types)
        ctx = parse_context(self.context) if self.context else None
        return parse_net(self.net, len(types)), types, ctx

    def valuation(self) -> Valuation:
        return Valuation(atoms=self.atoms)


def load_corpus(path: Optional[str] = None) -> list[CorpusEntry]:
    """Load corpus entries from a YAML file, the bundled one by default."""
    corpus_path = Path(path).expanduser() if path else CORPUS_PATH
    if not corpus_path.exists():
        raise FileNotFoundError(f"Corpus not found: {corpus_path}")
    with open(corpus_path) as f:
        data = yaml.safe_load(f) or {}
    return [CorpusEntry(**entry) for entry in data.get("nets", [])]


# Random derivations


@dataclass
class GeneratedNet:
    name: str
    derivation: Derivation
    net: Net
    types: tuple[LType, ...]
    context: dict[Var, LType]


def _move(d: Derivation, n: int, picks: list[int]) -> Derivation:
    """Reorder n conclusions so that ``picks`` come last, in that order."""
    order = [i for i in range(n) if i not in picks] + picks
    return d if order == list(range(n)) else Perm(tuple(order), d)


class NetGenerator:
    """Random derivations whose last conclusion has a requested type.

    ``chain_rule`` and ``box_box`` make box arguments prefer coderelictions
    and boxes, which are the shapes the commutative rules act on.
    """

    def __init__(
        self,
        seed: int,
        atoms: tuple[str, ...] = ("a", "b"),
        depth: int = 3,
        cut_rate: float = 0.6,
        chain_rule: bool = False,
        box_box: bool = False,
    ):
        self.rng = random.Random(seed)
        self.atoms = atoms
        self.depth = depth
        self.cut_rate = cut_rate
        self.chain_rule = chain_rule
        self.box_box = box_box
        self.fresh = FreshNames(prefix="x")
        self.check = DerivationChecker()

    def types_of(self, d: Derivation) -> tuple[LType, ...]:
        return self.check(d).types

    def random_type(self, depth: int = 1) -> LType:
        atom = self.rng.choice(self.atoms)
        if depth <= 0 or self.rng.random() < 0.35:
            return Atom(atom) if self.rng.random() < 0.6 else CoAtom(atom)
        match self.rng.choice(("tens", "par", "excl", "quest")):
            case "tens":
                return TensType(self.random_type(depth - 1), self.random_type(depth - 1))
            case "par":
                return ParType(self.random_type(depth - 1), self.random_type(depth - 1))
            case "excl":
                return Excl(self.random_type(depth - 1))
        return Quest(self.random_type(depth - 1))

    def axiom(self, t: LType) -> Derivation:
        """⊢ t⊥, t"""
        return Ax(self.fresh.var().base, dual(t))

    def prove(self, t: LType, depth: int, prefer: Optional[str] = None) -> Derivation:
        """A derivation whose last conclusion is t."""
        if depth <= 0:
            return self.axiom(t)
        options = ["ax", "cut"]
        match t:
            case TensType():
                options += ["tens", "tens"]
            case ParType():
                options += ["par", "par"]
            case Quest():
                options += ["der", "weak", "contr"]
            case Excl():
                options += ["coder", "coweak", "cocontr", "prom", "prom"]
        rule = prefer if prefer in options else self.rng.choice(options)
        return getattr(self, f"_{rule}")(t, depth - 1)

    def _ax(self, t: LType, depth: int) -> Derivation:
        return self.axiom(t)

    def _cut(self, t: LType, depth: int) -> Derivation:
        u = self.random_type(1)
        left = self.prove(u, depth)
        first = self.prove(t, depth)
        right = Mix(first, self.prove(dual(u), depth))
        d = CutRule(left, right)
        nl = len(self.types_of(left)) - 1
        at = nl + len(self.types_of(first)) - 1
        return _move(d, len(self.types_of(d)), [at])

    def _tens(self, t: TensType, depth: int) -> Derivation:
        return TensRule(self.prove(t.left, depth), self.prove(t.right, depth))

    def _pair_last(self, first: Derivation, second: Derivation) -> Derivation:
        """Mix of both with their last conclusions moved to the end."""
        d = Mix(first, second)
        n = len(self.types_of(d))
        return _move(d, n, [len(self.types_of(first)) - 1, n - 1])

    def _par(self, t: ParType, depth: int) -> Derivation:
        return ParRule(self._pair_last(self.prove(t.left, depth), self.prove(t.right, depth)))

    def _der(self, t: Quest, depth: int) -> Derivation:
        return Dereliction(self.prove(t.body, depth))

    def _weak(self, t: Quest, depth: int) -> Derivation:
        return Weakening(t.body, self.prove(self.random_type(1), depth))

    def _contr(self, t: Quest, depth: int) -> Derivation:
        return Contraction(self._pair_last(self.prove(t, depth), self.prove(t, depth)))

    def _coder(self, t: Excl, depth: int) -> Derivation:
        return Codereliction(self.prove(t.body, depth))

    def _coweak(self, t: Excl, depth: int) -> Derivation:
        return Coweakening(t.body)

    def _cocontr(self, t: Excl, depth: int) -> Derivation:
        return Cocontraction(self.prove(t, depth), self.prove(t, depth))

    def _prom(self, t: Excl, depth: int) -> Derivation:
        content = self.prove(t.body, depth)
        n = len(self.types_of(content))
        for j in range(n - 1):
            if not isinstance(self.types_of(content)[j], Quest):
                moved = Dereliction(_move(content, n, [j]))
                content = Perm(tuple(range(j)) + (n - 1,) + tuple(range(j, n - 1)), moved)
        prefer = "coder" if self.chain_rule else "prom" if self.box_box else None
        args = []
        for q in self.types_of(content)[:-1]:
            args.append(self.prove(Excl(dual(q.body)), depth, prefer))
        return Prom(content, tuple(args))

    def derivation(self) -> Derivation:
        t = self.random_type(2)
        if self.rng.random() < self.cut_rate:
            return self._cut(t, self.depth)
        return self.prove(t, self.depth)

    def generate(self, name: str, max_size: int = 12, attempts: int = 50) -> GeneratedNet:
        """A net with at most ``max_size`` constructors, or the smallest one tried."""
        best: Optional[GeneratedNet] = None
        for _ in range(attempts):
            d = self.derivation()
            s = self.check(d)
            candidate = GeneratedNet(name, d, s.net, s.types, s.context)
            size = s.simple.size()
            if size <= max_size:
                return candidate
            if best is None or size < best.net.support()[0].size():
                best = candidate
        logger.debug("no net of size %d for %s, keeping the smallest", max_size, name)
        assert best is not None
        return best


def generate_corpus(count: int, seed: int = 0, max_size: int = 12, depth: int = 3,
                    chain_rule: bool = False, box_box: bool = False) -> list[GeneratedNet]:
    gen = NetGenerator(seed, depth=depth, chain_rule=chain_rule, box_box=box_box)
    return [gen.generate(f"gen{i}", max_size) for i in range(count)]


# Random terms


_NAMES = ("x", "y", "z")


def random_dterm(rng: random.Random, depth: int = 3) -> dl.DTerm:
    if depth <= 0:
        return dl.Var(rng.choice(_NAMES))
    match rng.choice(("var", "abs", "abs", "app", "app", "dapp")):
        case "var":
            return dl.Var(rng.choice(_NAMES))
        case "abs":
            return dl.Abs(rng.choice(_NAMES), random_dterm(rng, depth - 1))
        case "app":
            return dl.App(random_dterm(rng, depth - 1), random_dcomb(rng, depth - 1))
    return dl.DApp(random_dterm(rng, depth - 1), (random_dterm(rng, depth - 1),))


def random_dcomb(rng: random.Random, depth: int = 3) -> dl.DComb:
    terms = [(random_dterm(rng, depth), rng.choice((1, 1, 2, Fraction(1, 2)))) for _ in range(rng.randint(1, 2))]
    return LinComb(terms)


def random_rterm(rng: random.Random, depth: int = 3) -> rc.RTerm:
    if depth <= 0:
        return rc.Var(rng.choice(_NAMES))
    match rng.choice(("var", "abs", "app", "app")):
        case "var":
            return rc.Var(rng.choice(_NAMES))
        case "abs":
            return rc.Abs(rng.choice(_NAMES), random_rterm(rng, depth - 1))
    bunch = Multiset(random_rterm(rng, depth - 1) for _ in range(rng.randint(0, 2)))
    return rc.BApp(random_rterm(rng, depth - 1), bunch)
