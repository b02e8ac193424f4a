"""Tests for the net, type and term grammars."""

import pytest
from hypothesis import given, settings

from dillbench.algebra import LinComb
from dillbench.corpus import load_corpus
from dillbench.errors import DisjointnessError, ParseError
from dillbench.parser import (
    parse_context,
    parse_net,
    parse_rterm,
    parse_type,
    parse_types,
    print_net,
    print_rterm,
    print_type,
)
from dillbench.syntax import Var, alpha_equivalent
from dillbench.typecheck import Atom, Excl

from .strategies import rterms


class TestNets:
    def test_axiom_net(self):
        assert print_net(parse_net("([x, ~x] ;)")) == "([x, ~x] ;)"

    def test_empty_net(self):
        assert print_net(parse_net("(;)")) == "(;)"

    def test_zero_takes_the_given_width(self):
        net = parse_net("0", 2)
        assert net.width == 2
        assert net.is_zero()
        assert print_net(net) == "0"

    def test_coefficients_merge(self):
        net = parse_net("1/2 * ([x, ~x] ;) + 1/2 * ([x, ~x] ;)")
        assert print_net(net) == "([x, ~x] ;)"

    def test_width_mismatch_in_sum(self):
        with pytest.raises(ParseError):
            parse_net("([x, ~x] ;) + ([y] ;)")

    def test_error_position(self):
        with pytest.raises(ParseError) as info:
            parse_net("([x, ~x]\n ; <x|")
        assert info.value.line == 2

    def test_variable_used_twice(self):
        with pytest.raises(DisjointnessError):
            parse_net("([x tens x] ;)")

    def test_box_needs_matching_width(self):
        with pytest.raises(ParseError):
            parse_net("([box{([y] ;)}(x), ~x] ;)")

    def test_bundled_corpus_prints_stably(self):
        for entry in load_corpus():
            net, types, _ = entry.parsed()
            again = parse_net(print_net(net), len(types))
            assert print_net(again) == print_net(net), entry.name
            assert alpha_equivalent(again, net)


class TestTypes:
    def test_round_trip(self):
        assert print_type(parse_type("!(a tens ~b) par ?c")) == "!(a tens ~b) par ?c"

    def test_sequent(self):
        assert parse_types("") == ()
        assert len(parse_types("a, !a, ?(a par b)")) == 3

    def test_context(self):
        ctx = parse_context('{"x": "!a", "~y": "a"}')
        assert ctx == {Var("x"): Excl(Atom("a")), Var("y", True): Atom("a")}

    def test_bad_context(self):
        with pytest.raises(ParseError):
            parse_context("[1, 2]")


class TestResourceTerms:
    def test_bunches_are_multilinear(self):
        assert parse_rterm("<x>[y + z, y + z]") == parse_rterm("<x>[y, y] + 2 * <x>[y, z] + <x>[z, z]")

    @settings(max_examples=50)
    @given(rterms())
    def test_print_then_parse(self, t):
        assert parse_rterm(print_rterm(t)) == LinComb.single(t)
