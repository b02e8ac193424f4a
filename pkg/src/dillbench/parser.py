"""Text grammars and printers for nets, types and terms.

Nets:   ``2/3 * ([x, ~x] ; <w|cw>) + ([cd(y) tens ~y] ;)``
Types:  ``!(a tens ~b) par ?c``
Terms:  ``\\x. (x) (y + z)``, ``D (\\x. x) . u`` and ``<x>[y, z]``

Printing is deterministic and ``parse(print(x))`` gives back x up to the
canonical order of sums and cuts.
"""

import json
import re
from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from . import differential as dl
from . import resource as rc
from .algebra import LinComb, SemiringMode, format_scalar
from .errors import ParseError
from .syntax import (
    KEYWORDS,
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
from .typecheck import Atom, CoAtom, Excl, LType, Meta, ParType, Quest, TensType


@dataclass
class Token:
    kind: str  # int | ident | D | punct | eof
    text: str
    line: int
    column: int


_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<comment>\#[^\n]*)|(?P<int>\d+)|(?P<ident>[a-z][a-z0-9_]*)"
    r"|(?P<D>D)|(?P<punct>[~()\[\]{}<>|,;:*+\-/!?\\.])"
)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup or ""
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        newlines = m.group().count("\n")
        if newlines:
            line += newlines
            line_start = m.start() + m.group().rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Reader:
    """Token cursor shared by the grammars."""

    def __init__(self, text: str, mode: SemiringMode = SemiringMode.RAT):
        self.tokens = tokenize(text)
        self.pos = 0
        self.mode = mode

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind != "eof"

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        tok = self.tok
        self.pos += 1
        return tok

    def fail(self, message: str) -> None:
        found = self.tok.text or "end of input"
        raise ParseError(f"{message}, found {found!r}", self.tok.line, self.tok.column)

    def ident(self) -> str:
        if self.tok.kind != "ident":
            self.fail("expected a name")
        name = self.tok.text
        self.pos += 1
        return name

    def done(self) -> None:
        if self.tok.kind != "eof":
            self.fail("unexpected trailing input")

    def rational(self) -> Fraction:
        negative = self.accept("-")
        if self.tok.kind != "int":
            self.fail("expected a number")
        num = int(self.tok.text)
        self.pos += 1
        den = 1
        if self.accept("/"):
            if self.tok.kind != "int":
                self.fail("expected a denominator")
            den = int(self.tok.text)
            self.pos += 1
            if den == 0:
                self.fail("zero denominator")
        q = Fraction(num, den)
        return -q if negative else q

    def combination(self, simple: Callable[[], LinComb]) -> LinComb:
        """``[coef *] simple (+ [coef *] simple)*`` where a bare ``0`` is the zero term."""
        total: LinComb = LinComb.zero(self.mode)
        while True:
            sign = -1 if self.accept("-") else 1
            if self.tok.kind == "int":
                q = self.rational()
                if self.accept("*"):
                    total = total + simple().scale(sign * q)
                elif q != 0:
                    self.fail("expected '*' after a coefficient")
            else:
                term = simple()
                total = total + (term.scale(-1) if sign < 0 else term)
            if not self.accept("+"):
                if self.at("-"):
                    continue
                return total


# Types


class _TypeParser(_Reader):
    def type_(self) -> LType:
        a = self.prefix()
        while self.at("tens") or self.at("par"):
            op = self.ident()
            b = self.prefix()
            a = TensType(a, b) if op == "tens" else ParType(a, b)
        return a

    def prefix(self) -> LType:
        if self.accept("!"):
            return Excl(self.prefix())
        if self.accept("?"):
            return Quest(self.prefix())
        if self.accept("~"):
            return CoAtom(self.ident())
        if self.accept("("):
            a = self.type_()
            self.expect(")")
            return a
        if self.at("tens") or self.at("par"):
            self.fail("expected a type")
        return Atom(self.ident())


def parse_type(text: str) -> LType:
    r = _TypeParser(text)
    a = r.type_()
    r.done()
    return a


def parse_types(text: str) -> tuple[LType, ...]:
    """Comma separated list of types; the empty string is the empty sequent."""
    r = _TypeParser(text)
    out: list[LType] = []
    if r.tok.kind != "eof":
        out.append(r.type_())
        while r.accept(","):
            out.append(r.type_())
    r.done()
    return tuple(out)


def print_type(a: LType) -> str:
    match a:
        case Atom(name):
            return name
        case CoAtom(name):
            return f"~{name}"
        case TensType(l, r):
            return f"{_type_operand(l)} tens {_type_operand(r)}"
        case ParType(l, r):
            return f"{_type_operand(l)} par {_type_operand(r)}"
        case Excl(b):
            return f"!{_type_operand(b)}"
        case Quest(b):
            return f"?{_type_operand(b)}"
        case Meta(i, neg):
            return f"{'~' if neg else ''}'t{i}"
    raise TypeError(f"not a type: {a!r}")


def _type_operand(a: LType) -> str:
    s = print_type(a)
    return f"({s})" if isinstance(a, (TensType, ParType)) else s


def parse_context(text: str) -> dict[Var, LType]:
    """Typing context from JSON ``{"x": "!a", "~y": "b"}``."""
    try:
        data = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid context JSON: {e.msg}", e.lineno, e.colno) from e
    if not isinstance(data, dict):
        raise ParseError("context must be a JSON object")
    ctx: dict[Var, LType] = {}
    for key, value in data.items():
        co = key.startswith("~")
        ctx[Var(key[1:] if co else key, co)] = parse_type(value)
    return ctx


def print_context(ctx: dict[Var, LType]) -> str:
    items = sorted(ctx.items(), key=lambda kv: (kv[0].base, kv[0].co))
    return json.dumps({str(v): print_type(a) for v, a in items}, indent=2)


# Nets


class _NetParser(_TypeParser):
    def net_terms(self) -> tuple[int | None, LinComb]:
        total = self.combination(lambda: LinComb.single(self.simple(), 1, self.mode))
        widths = {p.width for p, _ in total}
        if len(widths) > 1:
            self.fail("summands of different widths")
        return (widths.pop() if widths else None), total

    def net(self, width: int | None = None) -> Net:
        found, total = self.net_terms()
        if found is not None and width is not None and found != width:
            self.fail(f"expected a net of width {width}")
        return Net(found if found is not None else (width or 0), total)

    def simple(self) -> SimpleNet:
        self.expect("(")
        trees: list[Tree] = []
        if self.accept("["):
            if not self.at("]"):
                trees = self.tree_list("]")
            self.expect("]")
        elif not self.at(";"):
            trees = self.tree_list(";")
        self.expect(";")
        cuts: list[Cut] = []
        if self.at("<"):
            cuts.append(self.cut())
            while self.accept(","):
                cuts.append(self.cut())
        self.expect(")")
        return SimpleNet(tuple(trees), tuple(cuts))

    def tree_list(self, end: str) -> list[Tree]:
        out = [self.tree()]
        while self.accept(","):
            out.append(self.tree())
        return out

    def cut(self) -> Cut:
        self.expect("<")
        left = self.tree()
        self.expect("|")
        right = self.tree()
        self.expect(">")
        return Cut(left, right)

    def tree(self) -> Tree:
        t = self.unary()
        while self.at("tens") or self.at("par"):
            op = self.ident()
            u = self.unary()
            t = Tens(t, u) if op == "tens" else Par(t, u)
        return t

    def unary(self) -> Tree:
        if self.accept("~"):
            return Var(self.ident(), True)
        if self.accept("("):
            t = self.tree()
            self.expect(")")
            return t
        name = self.ident()
        match name:
            case "w" | "cw":
                ann = self.prefix() if self.accept(":") else None
                return Weak(ann) if name == "w" else Coweak(ann)
            case "d" | "cd":
                self.expect("(")
                sub = self.tree()
                self.expect(")")
                return Der(sub) if name == "d" else Coder(sub)
            case "c" | "cc":
                self.expect("(")
                left = self.tree()
                self.expect(",")
                right = self.tree()
                self.expect(")")
                return Contr(left, right) if name == "c" else Cocontr(left, right)
            case "box":
                self.expect("{")
                found, content = self.net_terms()
                self.expect("}")
                self.expect("(")
                args = [] if self.at(")") else self.tree_list(")")
                self.expect(")")
                if found is not None and found != len(args) + 1:
                    self.fail(f"box with {len(args)} arguments needs content of width {len(args) + 1}")
                return Box(len(args), Net(len(args) + 1, content), tuple(args))
            case "tens" | "par":
                self.fail("expected a tree")
        return Var(name)


def parse_net(text: str, width: int | None = None, mode: SemiringMode = SemiringMode.RAT) -> Net:
    """Parse a net; a bare ``0`` gets ``width`` (default 0)."""
    r = _NetParser(text, mode)
    net = r.net(width)
    r.done()
    return net


def parse_tree(text: str) -> Tree:
    r = _NetParser(text)
    t = r.tree()
    r.done()
    return t


def print_tree(t: Tree) -> str:
    match t:
        case Var(base, co):
            return f"~{base}" if co else base
        case Tens(l, r):
            return f"{_tree_operand(l)} tens {_tree_operand(r)}"
        case Par(l, r):
            return f"{_tree_operand(l)} par {_tree_operand(r)}"
        case Weak(ann):
            return "w" if ann is None else f"w:{_type_operand(ann)}"
        case Coweak(ann):
            return "cw" if ann is None else f"cw:{_type_operand(ann)}"
        case Der(s):
            return f"d({print_tree(s)})"
        case Coder(s):
            return f"cd({print_tree(s)})"
        case Contr(l, r):
            return f"c({print_tree(l)}, {print_tree(r)})"
        case Cocontr(l, r):
            return f"cc({print_tree(l)}, {print_tree(r)})"
        case Box():
            args = ", ".join(print_tree(a) for a in t.args)
            return f"box{{{print_net(t.content)}}}({args})"
    raise TypeError(f"not a tree: {t!r}")


def _tree_operand(t: Tree) -> str:
    s = print_tree(t)
    return f"({s})" if isinstance(t, (Tens, Par)) else s


def print_simple(p: SimpleNet) -> str:
    cuts = ", ".join(f"<{print_tree(c.left)}|{print_tree(c.right)}>" for c in p.cuts)
    if not p.trees:
        return f"(; {cuts})" if cuts else "(;)"
    trees = ", ".join(print_tree(t) for t in p.trees)
    return f"([{trees}] ; {cuts})" if cuts else f"([{trees}] ;)"


def _print_combination(comb: LinComb, show: Callable[[Any], str]) -> str:
    if not comb:
        return "0"
    parts = []
    for term, c in comb:
        parts.append(show(term) if c == 1 else f"{format_scalar(c)} * {show(term)}")
    return " + ".join(parts)


def print_net(net: Net) -> str:
    return _print_combination(net.sum, print_simple)


# Differential λ-terms


class _DTermParser(_Reader):
    def comb(self) -> LinComb:
        return self.combination(self.term)

    def term(self) -> LinComb:
        if self.accept("\\"):
            x = self.ident()
            self.expect(".")
            return dl.abstract(x, self.term())
        if self.accept("D"):
            head = self.argument()
            self.expect(".")
            return dl.differentiate(head, self.argument())
        if self.accept("("):
            head = self.comb()
            self.expect(")")
            while self.tok.kind == "ident" or self.at("("):
                head = dl.apply(head, self.argument())
            return head
        return dl.var(self.ident())

    def argument(self) -> LinComb:
        if self.accept("("):
            c = self.comb()
            self.expect(")")
            return c
        return dl.var(self.ident())


def parse_dterm(text: str) -> LinComb:
    r = _DTermParser(text)
    c = r.comb()
    r.done()
    return c


def print_dterm(t: "dl.DTerm") -> str:
    match t:
        case dl.Var(name):
            return name
        case dl.Abs(x, body):
            return f"\\{x}. {print_dterm(body)}"
        case dl.App(head, arg):
            return f"({print_dterm(head)}) {_dterm_argument(arg)}"
        case dl.DApp(head, directions):
            s = _dterm_operand(head)
            for n in directions:
                s = f"D {s} . {_dterm_operand(n)}"
                s = f"({s})"
            return s[1:-1]
    raise TypeError(f"not a term: {t!r}")


def _dterm_operand(t: "dl.DTerm") -> str:
    return t.name if isinstance(t, dl.Var) else f"({print_dterm(t)})"


def _dterm_argument(comb: LinComb) -> str:
    items = comb.items()
    if len(items) == 1 and items[0][1] == 1 and isinstance(items[0][0], dl.Var):
        return items[0][0].name
    return f"({print_dcomb(comb)})"


def print_dcomb(comb: LinComb) -> str:
    return _print_combination(comb, print_dterm)


# Resource terms


class _RTermParser(_Reader):
    def comb(self) -> LinComb:
        return self.combination(self.term)

    def term(self) -> LinComb:
        if self.accept("\\"):
            x = self.ident()
            self.expect(".")
            return rc.abstract(x, self.term())
        if self.accept("<"):
            head = self.comb()
            self.expect(">")
            self.expect("[")
            slots = []
            if not self.at("]"):
                slots.append(self.comb())
                while self.accept(","):
                    slots.append(self.comb())
            self.expect("]")
            return rc.bunch_apply(head, slots)
        if self.accept("("):
            c = self.comb()
            self.expect(")")
            return c
        return rc.var(self.ident())


def parse_rterm(text: str) -> LinComb:
    r = _RTermParser(text)
    c = r.comb()
    r.done()
    return c


def print_rterm(t: "rc.RTerm") -> str:
    match t:
        case rc.Var(name):
            return name
        case rc.Abs(x, body):
            return f"\\{x}. {print_rterm(body)}"
        case rc.BApp(head, bunch):
            return f"<{print_rterm(head)}>[{', '.join(print_rterm(s) for s in bunch)}]"
    raise TypeError(f"not a term: {t!r}")


def print_rcomb(comb: LinComb) -> str:
    return _print_combination(comb, print_rterm)


__all__ = [
    "KEYWORDS",
    "parse_context",
    "parse_dterm",
    "parse_net",
    "parse_rterm",
    "parse_tree",
    "parse_type",
    "parse_types",
    "print_context",
    "print_dcomb",
    "print_dterm",
    "print_net",
    "print_rcomb",
    "print_rterm",
    "print_simple",
    "print_tree",
    "print_type",
]
