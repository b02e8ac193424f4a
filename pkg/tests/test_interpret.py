"""Tests for the interpretation of nets and the invariance check."""

import json
from fractions import Fraction

import pytest

from dillbench.algebra import EMPTY, Multiset
from dillbench.config import RunConfig, Valuation
from dillbench.corpus import load_corpus
from dillbench.errors import FuelExhausted, NegativeCoefficient
from dillbench.interpret import interpret_net
from dillbench.invariance import check_invariance, reduction_sequence, strategy_of
from dillbench.parser import parse_net, parse_types
from dillbench.webs import point_degree


def value(model, net, types, valuation, bound=2):
    return interpret_net(model, parse_net(net), parse_types(types), None, valuation, bound).values


def restrict(values, bound):
    return {t: c for t, c in values.items() if point_degree(t) <= bound}


class TestInterpretNet:
    def test_identity_is_the_diagonal(self, valuation):
        assert value("wrel", "([x, ~x] ;)", "a, ~a", valuation) == {("p", "p"): 1, ("q", "q"): 1}

    def test_codereliction(self, valuation):
        assert value("wrel", "([~x, cd(x)] ;)", "~a, !a", valuation) == {
            ("p", Multiset(["p"])): 1,
            ("q", Multiset(["q"])): 1,
        }

    def test_weakening(self, valuation):
        assert value("rel", "([w:?b, x, ~x] ;)", "?b, a, ~a", valuation) == {
            (EMPTY, "p", "p"): 1,
            (EMPTY, "q", "q"): 1,
        }

    def test_coefficients(self, valuation):
        got = value("wrel", "1/2 * ([x, ~x] ;) + 1/2 * ([x, ~x] ;)", "a, ~a", valuation)
        assert got == {("p", "p"): 1, ("q", "q"): 1}
        got = value("wrel", "-1 * ([x, ~x] ;)", "a, ~a", valuation)
        assert got == {("p", "p"): -1, ("q", "q"): -1}

    def test_negative_coefficient_has_no_relational_value(self, valuation):
        with pytest.raises(NegativeCoefficient):
            value("rel", "-1 * ([x, ~x] ;)", "a, ~a", valuation)

    def test_cut_against_codereliction_picks_singletons(self, valuation):
        got = value("wrel", "([x, ~y] ; <d(~x) | cd(y)>)", "a, ~a", valuation)
        assert got == {("p", "p"): 1, ("q", "q"): 1}

    def test_zero_net(self, valuation):
        assert value("wrel", "(; <w:?a | cw:!~a>) + -1 * (; <w:?a | cw:!~a>)", "", valuation) == {}

    def test_json(self, valuation):
        result = interpret_net("wrel", parse_net("2 * ([x, ~x] ;)"), parse_types("b, ~b"), None, valuation, 1)
        assert json.loads(result.to_json()) == [{"point": ["r", "r"], "val": "2"}]
        result = interpret_net("rel", parse_net("([x, ~x] ;)"), parse_types("b, ~b"), None, valuation, 1)
        assert json.loads(result.to_json()) == [["r", "r"]]

    def test_values_are_fractions(self, valuation):
        got = value("wrel", "1/3 * ([x, ~x] ;)", "b, ~b", valuation)
        assert got == {("r", "r"): Fraction(1, 3)}


PROMOTED_CONTRACTION = "([box{([c(d(~y), d(~z)), y tens z] ;)}(box{([cw:!b] ;)}())] ;)"


class TestTruncationStability:
    def test_cut_free_box_keeps_points_built_from_larger_arguments(self, valuation):
        got = value("wrel", PROMOTED_CONTRACTION, "!(!b tens !b)", valuation)
        assert got[(Multiset([(EMPTY, EMPTY), (EMPTY, EMPTY)]),)] == 1

    @pytest.mark.parametrize("model", ["rel", "wrel"])
    @pytest.mark.parametrize(
        "net, types",
        [
            (PROMOTED_CONTRACTION, "!(!b tens !b)"),
            ("([box{([d(~u), u] ;)}(box{([y par ~y] ;)}())] ;)", "!(a par ~a)"),
            ("([box{([d(~y), y] ;)}(cd(x)), ~x] ;)", "!a, ~a"),
            ("([box{([d(~y), y] ;)}(cw:!a)] ;)", "!a"),
            ("([~x, ~u, ~v] ; <c(u, v) | box{([d(~y), y] ;)}(x)>)", "?~a, !a, !a"),
        ],
    )
    def test_raising_the_bound_only_adds_larger_points(self, model, net, types):
        small = Valuation.uniform(["a", "b"], 1)
        assert value(model, net, types, small, bound=1) == restrict(value(model, net, types, small, bound=3), 1)


class TestReductionSequence:
    def test_yields_source_first(self):
        net = parse_net("([x, ~z] ; <~x | z>)")
        steps = list(reduction_sequence(net, 10, strategy_of(RunConfig())))
        assert steps[0] == (None, net)
        assert len(steps) == 2

    def test_fuel(self):
        net = parse_net("([x, ~y] ; <d(~x) | cd(y)>)")
        with pytest.raises(FuelExhausted):
            list(reduction_sequence(net, 1, strategy_of(RunConfig())))


class TestCheckInvariance:
    @pytest.mark.parametrize("entry", load_corpus(), ids=lambda e: e.name)
    def test_bundled_corpus(self, entry):
        net, types, context = entry.parsed()
        cases = check_invariance(entry.name, net, types, context, entry.valuation(), RunConfig(degree=2))
        assert [c.model for c in cases] == ["rel", "wrel"]
        for case in cases:
            assert case.ok, case.detail

    def test_every_step(self, valuation):
        config = RunConfig(degree=2)
        net = parse_net("([~x, ~y, ~z] ; <c(x, y) | cd(z)>)")
        cases = check_invariance("c-cd", net, parse_types("!a, !a, ~a"), None, valuation, config,
                                 each_step=True)
        assert all(c.ok for c in cases)
        assert all(c.steps > 0 for c in cases)

    def test_ill_typed_net_fails_every_model(self, valuation):
        net = parse_net("(; <w:?a | cw:!a>)")
        cases = check_invariance("clash", net, (), None, valuation, RunConfig())
        assert [c.ok for c in cases] == [False, False]
        assert {c.exit_code for c in cases} == {1}

    def test_fuel_exhaustion_is_reported(self, valuation):
        net = parse_net("([x, ~y] ; <d(~x) | cd(y)>)")
        cases = check_invariance("short", net, parse_types("a, ~a"), None, valuation, RunConfig(fuel=1),
                                 models=("wrel",))
        assert len(cases) == 1
        assert not cases[0].ok
        assert cases[0].exit_code == 3

    def test_valuation_must_cover_atoms(self):
        net = parse_net("([x, ~x] ;)")
        cases = check_invariance("unknown", net, parse_types("c, ~c"), None, Valuation(), RunConfig(),
                                 models=("wrel",))
        assert not cases[0].ok
