"""Tests for cut elimination."""

import random
import re
from itertools import islice

import pytest

from dillbench.corpus import generate_corpus, load_corpus
from dillbench.errors import FuelExhausted
from dillbench.invariance import reduction_sequence
from dillbench.parser import parse_net, print_net
from dillbench.rewrite import COMMUTATIVE, RuleId, Strategy, find_redexes, normalize, step, trace
from dillbench.syntax import alpha_equivalent, canonical_net
from dillbench.typecheck import typecheck_net


def rules_of(text: str) -> set[RuleId]:
    return {r.rule for r in find_redexes(parse_net(text))}


class TestRedexes:
    @pytest.mark.parametrize(
        "text, rule",
        [
            ("([x, ~z] ; <~x | z>)", RuleId.AX),
            ("([~x par ~y, z tens w] ; <x tens y | ~z par ~w>)", RuleId.TENS_PAR),
            ("(; <w:?a | cw:!~a>)", RuleId.W_CW),
            ("([x] ; <d(~x) | cw:!a>)", RuleId.D_CW),
            ("([x, ~y] ; <d(~x) | cd(y)>)", RuleId.D_CD),
            ("([~x, ~y] ; <w:?~a | cc(x, y)>)", RuleId.W_CC),
            ("([~x, ~y] ; <c(x, y) | cw:!a>)", RuleId.C_CW),
            ("([x, ~y, ~z] ; <d(~x) | cc(y, z)>)", RuleId.D_CC),
            ("([~x, ~y, ~z] ; <c(x, y) | cd(z)>)", RuleId.C_CD),
            ("([~x, ~u, ~v] ; <c(u, v) | box{([d(~y), y] ;)}(x)>)", RuleId.BOX_C),
            ("([~x] ; <w:?~a | box{([d(~y), y] ;)}(x)>)", RuleId.BOX_W),
            ("([~x] ; <d(x) | box{([y par ~y] ;)}()>)", RuleId.BOX_D),
            ("([box{([d(~y), y] ;)}(cd(x)), ~x] ;)", RuleId.CHAIN),
            ("([box{([d(~y), y] ;)}(cw:!a)] ;)", RuleId.COM_CW),
        ],
    )
    def test_rule_is_found(self, text, rule):
        assert rule in rules_of(text)

    def test_normal_net_has_no_redex(self):
        assert find_redexes(parse_net("([x, ~x] ;)")) == []

    def test_commutative_rules(self):
        assert RuleId.CHAIN in COMMUTATIVE
        assert RuleId.AX not in COMMUTATIVE


class TestSteps:
    def test_weakening_against_coweakening_vanishes(self):
        assert print_net(normalize(parse_net("(; <w:?a | cw:!~a>)"))) == "(;)"

    def test_axiom_cut(self):
        assert alpha_equivalent(normalize(parse_net("([x, ~z] ; <~x | z>)")), parse_net("([x, ~x] ;)"))

    def test_dereliction_against_coweakening_is_zero(self):
        net = normalize(parse_net("([x] ; <d(~x) | cw:!a>)"))
        assert net.is_zero()
        assert net.width == 1

    def test_dereliction_against_codereliction(self):
        net = normalize(parse_net("([x, ~y] ; <d(~x) | cd(y)>)"))
        assert alpha_equivalent(net, parse_net("([x, ~x] ;)"))

    def test_dereliction_against_cocontraction_sums(self):
        net = normalize(parse_net("([x, ~y, ~z] ; <d(~x) | cc(y, z)>)"))
        assert len(net) == 2

    def test_box_opened_by_dereliction(self):
        net = normalize(parse_net("([~x] ; <d(x) | box{([y par ~y] ;)}()>)"))
        assert alpha_equivalent(net, parse_net("([y par ~y] ;)"))

    def test_step_leaves_other_summands(self):
        net = parse_net("([x, ~z] ; <~x | z>) + 2 * ([y, ~y] ;)")
        r = find_redexes(net)[0]
        after = canonical_net(step(net, r))
        assert [c for _, c in after] == [3]

    def test_axiom_cut_against_a_free_wire(self):
        net = parse_net("([~y] ; <x | y>)")
        redexes = find_redexes(net)
        assert [r.rule for r in redexes] == [RuleId.AX]
        assert alpha_equivalent(step(net, redexes[0]), parse_net("([x] ;)"))

    def test_cut_between_two_free_wires_is_not_a_redex(self):
        assert find_redexes(parse_net("(; <x | y>)")) == []


class TestTrace:
    def test_line_format(self):
        _, lines = trace(parse_net("(; <w:?a | cw:!~a>)"))
        assert len(lines) == 1
        assert re.fullmatch(r"#1 W-CW @cut0 : <.*>", lines[0])

    def test_fuel(self):
        with pytest.raises(FuelExhausted) as info:
            trace(parse_net("([x, ~y] ; <d(~x) | cd(y)>)"), fuel=1)
        assert info.value.steps == 1
        assert info.value.partial.width == 2

    def test_single_strategy_fires_only_listed_rules(self):
        net = parse_net("([x, ~y] ; <d(~x) | cd(y)>)")
        only_ax = Strategy("single", rules=frozenset({RuleId.AX}))
        assert normalize(net, strategy=only_ax) == net

    def test_random_strategy_needs_seed(self):
        with pytest.raises(ValueError):
            Strategy("random")

    def test_random_strategy_is_reproducible(self):
        net = parse_net("([~x, ~y, ~u, ~v] ; <c(d(x), d(y)) | cc(cd(u), cd(v))>)")
        s = Strategy("random", seed=7)
        assert trace(net, strategy=s) == trace(net, strategy=s)


class TestSubjectReduction:
    def test_steps_keep_generated_nets_typable(self):
        for g in generate_corpus(8, seed=2, max_size=10):
            for _, p in islice(reduction_sequence(g.net, 1000, Strategy()), 25):
                typecheck_net(g.context, p, g.types)

    def test_box_box_nets_stay_typable(self):
        for g in generate_corpus(5, seed=4, max_size=10, box_box=True):
            for _, p in islice(reduction_sequence(g.net, 1000, Strategy()), 25):
                typecheck_net(g.context, p, g.types)

    def test_bundled_nets(self):
        for entry in load_corpus():
            net, types, context = entry.parsed()
            for _, p in reduction_sequence(net, 1000, Strategy()):
                typecheck_net(context, p, types)


class TestStrategyChoice:
    def choose(self, text: str, strategy: Strategy = Strategy()):
        net = parse_net(text)
        return strategy.choose(find_redexes(net, strategy), random.Random(0))

    def test_cuts_in_index_order(self):
        chosen = self.choose("(; <w:?a | cw:!~a>, <w:?b | cw:!~b>)")
        assert (chosen.site.kind, chosen.site.index) == ("cut", 0)

    def test_cut_before_commutative_redex(self):
        chosen = self.choose("([box{([d(~y), y] ;)}(cw:!a)] ; <w:?b | cw:!~b>)")
        assert chosen.rule is RuleId.W_CW

    def test_innermost_box_level_first(self):
        inside = Strategy(reduce_inside_boxes=True)
        chosen = self.choose("([box{([x par ~z] ; <~x | z>)}()] ; <w:?b | cw:!~b>)", inside)
        assert chosen.rule is RuleId.AX
        assert chosen.site.depth() == 1

    def test_choice_ignores_enumeration_order(self):
        net = parse_net("([box{([d(~y), y] ;)}(cw:!a)] ; <w:?b | cw:!~b>)")
        redexes = find_redexes(net)
        assert Strategy().choose(redexes[::-1], random.Random(0)) == Strategy().choose(redexes, random.Random(0))
