"""Tests for the relational model."""

import random

import pytest

from dillbench.algebra import EMPTY, Multiset, SemiringMode
from dillbench.errors import SymmetryViolation, WebMismatch
from dillbench.laws import sample_web, symmetric_sample
from dillbench.rel import (
    Morphism,
    antiderivative_rel,
    check_symmetric_rel,
    rel_coderc,
    rel_combinator,
    rel_compose,
    rel_excl,
    rel_generator,
    rel_identity,
    rel_J,
    rel_permute,
    rel_promotion,
)
from dillbench.webs import ProdWeb, excl, pair_web
from dillbench.wrel import w_excl, w_promotion


def test_pairs_must_lie_in_the_webs(web2):
    with pytest.raises(WebMismatch):
        Morphism.of(web2, web2, [("zz", "a0")])


def test_dereliction_is_a_relation(web2):
    der = rel_generator("der", web2, 2)
    assert der.graph == frozenset({(Multiset(["a0"]), "a0"), (Multiset(["a1"]), "a1")})


def test_unknown_generator(web2):
    with pytest.raises(ValueError):
        rel_generator("nope", web2, 2)


def test_j_is_the_identity(web2):
    assert rel_J(web2, 3) == rel_identity(excl(web2, 3))


def test_exponential_matches_weighted_support(web2):
    r = Morphism.of(web2, web2, [("a0", "a0"), ("a0", "a1"), ("a1", "a1")])
    assert rel_excl(r, 2) == Morphism.from_w(w_excl(r.to_w(), 2))


def test_promotion_closed_form_matches_composite(web2):
    src = ProdWeb((excl(web2, 2),))
    f = Morphism.of(src, web2, [((EMPTY,), "a0"), ((Multiset(["a1"]),), "a1")])
    assert rel_promotion(f, 2) == Morphism.from_w(w_promotion(f.to_w(), 2))


def test_promotion_needs_exponential_sources(web2):
    with pytest.raises(WebMismatch):
        rel_promotion(rel_identity(web2), 2)


def test_combinators(web2):
    swap = Morphism.of(web2, web2, [("a0", "a1"), ("a1", "a0")])
    assert rel_combinator("compose", swap, swap) == rel_identity(web2)
    assert rel_combinator("dual", swap) == swap
    with pytest.raises(ValueError):
        rel_combinator("nope", swap)


def test_permute(web2):
    y = sample_web(1, "b")
    f = Morphism.of(web2, pair_web(web2, y), [("a0", ("a1", "b0"))])
    assert rel_permute(f, (1, 0)).graph == frozenset({("a0", ("b0", "a1"))})
    with pytest.raises(WebMismatch):
        rel_permute(f, (0, 0))


def test_compose_checks_webs(web2):
    with pytest.raises(WebMismatch):
        rel_compose(rel_identity(web2), rel_identity(excl(web2, 1)))


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_antiderivative(web2, seed):
    y = sample_web(1, "b")
    f = Morphism.from_w(symmetric_sample(web2, y, 2, SemiringMode.BOOL, random.Random(seed)))
    g = antiderivative_rel(f)
    assert rel_compose(g, rel_coderc(web2, 3)).restrict(f.source) == f


def test_asymmetric_relation_is_rejected(web2):
    y = sample_web(1, "b")
    f = Morphism.of(pair_web(excl(web2, 1), web2), y, [((Multiset(["a0"]), "a1"), "b0")])
    with pytest.raises(SymmetryViolation):
        check_symmetric_rel(f)
    with pytest.raises(SymmetryViolation):
        antiderivative_rel(f)
