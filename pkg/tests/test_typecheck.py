"""Tests for type inference on trees and nets."""

import pytest

from dillbench.errors import AmbiguousType, CutTypeClash, TypeMismatch, UnboundVar, WidthMismatch
from dillbench.parser import parse_context, parse_net, parse_tree, parse_type, parse_types, print_net
from dillbench.syntax import Var
from dillbench.typecheck import Atom, CoAtom, Excl, ParType, Quest, dual, typecheck_net, typecheck_tree


def check(net: str, types: str, context: str = ""):
    gamma = parse_types(types)
    return typecheck_net(parse_context(context) if context else None, parse_net(net, len(gamma)), gamma)


class TestTypes:
    def test_dual_is_involutive(self):
        a = parse_type("!(a tens ~b) par ?c")
        assert dual(dual(a)) == a
        assert dual(Atom("a")) == CoAtom("a")
        assert dual(Excl(Atom("a"))) == Quest(CoAtom("a"))


class TestTrees:
    def test_tree_under_context(self):
        phi = {Var("x"): Atom("a"), Var("y"): CoAtom("b")}
        assert typecheck_tree(phi, parse_tree("x par y")) == ParType(Atom("a"), CoAtom("b"))
        assert typecheck_tree(phi, parse_tree("d(x)")) == Quest(Atom("a"))

    def test_dual_variable_gets_dual_type(self):
        assert typecheck_tree({Var("x"): Excl(Atom("a"))}, parse_tree("~x")) == Quest(CoAtom("a"))

    def test_strict_needs_every_variable(self):
        with pytest.raises(UnboundVar):
            typecheck_tree({}, parse_tree("x"))

    def test_contraction_sides_agree(self):
        with pytest.raises(TypeMismatch):
            typecheck_tree({Var("x"): Quest(Atom("a")), Var("y"): Quest(Atom("b"))}, parse_tree("c(x, y)"))


class TestNets:
    def test_axiom(self):
        typing = check("([x, ~x] ;)", "a, ~a")
        assert typing.context[Var("x")] == Atom("a")
        assert typing.context[Var("x", True)] == CoAtom("a")

    def test_weakening_gets_annotated(self):
        typing = check("([w, x, ~x] ;)", "?b, a, ~a")
        assert print_net(typing.net) == "([w:?b, x, ~x] ;)"

    def test_cut_sides_must_be_dual(self):
        with pytest.raises(CutTypeClash):
            check("(; <w:?a | cw:!a>)", "")
        check("(; <w:?a | cw:!~a>)", "")

    def test_width(self):
        with pytest.raises(WidthMismatch):
            typecheck_net(None, parse_net("([x, ~x] ;)"), parse_types("a"))

    def test_undetermined_type(self):
        with pytest.raises(AmbiguousType):
            check("(; <x | ~x>)", "")

    def test_box_content_is_typed_against_its_ports(self):
        typing = check("([box{([d(~y), y] ;)}(x), ~x] ;)", "!a, ?~a")
        assert typing.context[Var("x")] == Excl(Atom("a"))

    def test_context_constrains_free_variables(self):
        with pytest.raises(TypeMismatch):
            check("([x, ~x] ;)", "a, ~a", '{"x": "b"}')

    def test_every_summand_is_checked(self):
        with pytest.raises(TypeMismatch):
            check("([x, ~x] ;) + ([d(y), ~y] ;)", "a, ~a")
