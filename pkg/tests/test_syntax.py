"""Tests for α-canonical forms."""

import random

import pytest
from hypothesis import given, settings

from dillbench.corpus import generate_corpus
from dillbench.parser import parse_net
from dillbench.syntax import Net, SimpleNet, Var, alpha_equivalent, canonical_net, rename

from .strategies import seeds


def rename_bound(net: Net, seed: int) -> Net:
    """Give the bound pairs of every simple net new names in a shuffled order."""
    rng = random.Random(seed)

    def one(p: SimpleNet) -> SimpleNet:
        bases = sorted({v.base for v in p.bound_variables})
        names = [f"r{i}" for i in range(len(bases))]
        rng.shuffle(names)
        mapping: dict[Var, Var] = {}
        for old, new in zip(bases, names):
            mapping[Var(old)] = Var(new)
            mapping[Var(old, True)] = Var(new, True)
        return rename(p, mapping)

    return Net(net.width, net.sum.map_terms(one))


class TestCutOnlyVariables:
    def test_crossed_wiring_in_any_naming(self):
        a = parse_net("(; <u par v | ~s tens ~t>, <s par t | ~v tens ~u>)")
        b = parse_net("(; <t par s | ~u tens ~v>, <u par v | ~t tens ~s>)")
        assert alpha_equivalent(a, b)
        assert canonical_net(a) == canonical_net(b)

    def test_different_wiring_stays_apart(self):
        crossed = parse_net("(; <u par v | ~s tens ~t>, <s par t | ~v tens ~u>)")
        straight = parse_net("(; <u par v | ~s tens ~t>, <s par t | ~u tens ~v>)")
        assert not alpha_equivalent(crossed, straight)

    def test_cut_order_does_not_matter(self):
        a = parse_net("(; <x par y | ~z tens ~w>, <z par w | ~x tens ~y>, <w:?a | cw:!~a>)")
        b = parse_net("(; <w:?a | cw:!~a>, <p par q | ~x tens ~y>, <x par y | ~p tens ~q>)")
        assert alpha_equivalent(a, b)

    def test_free_names_are_kept(self):
        assert not alpha_equivalent(parse_net("([x] ;)"), parse_net("([y] ;)"))


@pytest.mark.parametrize("box_box", [False, True])
@settings(max_examples=30, deadline=None)
@given(seed=seeds(), shuffle=seeds())
def test_renaming_bound_variables_keeps_the_canonical_form(box_box, seed, shuffle):
    for g in generate_corpus(2, seed=seed, max_size=12, depth=2, box_box=box_box):
        assert canonical_net(rename_bound(g.net, shuffle)) == canonical_net(g.net)
