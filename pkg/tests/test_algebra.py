"""Tests for multisets, binomials and linear combinations."""

from fractions import Fraction

import pytest
from hypothesis import given

from dillbench.algebra import (
    EMPTY,
    LinComb,
    Multiset,
    SemiringMode,
    enumerate_L,
    multiset_binomial,
    multiset_multinomial,
    multisets_up_to,
)
from dillbench.errors import MarginalMismatch, ModeViolation, SubsetViolation

from .strategies import multisets


class TestMultiset:
    def test_counts_and_order(self):
        m = Multiset(["b", "a", "b"])
        assert m.count("b") == 2
        assert len(m) == 3
        assert list(m) == ["a", "b", "b"]
        assert m == Multiset(["b", "b", "a"])

    def test_sum_and_difference(self):
        m = Multiset("ab") + Multiset("b")
        assert m == Multiset("abb")
        assert m - Multiset("b") == Multiset("ab")

    def test_difference_needs_submultiset(self):
        with pytest.raises(SubsetViolation):
            Multiset("a") - Multiset("b")

    def test_empty(self):
        assert len(EMPTY) == 0
        assert EMPTY <= Multiset("a")

    @given(multisets())
    def test_splits_cover_submultisets(self, m):
        splits = list(m.splits())
        expected = 1
        for _, n in m.items():
            expected *= n + 1
        assert len(splits) == expected
        assert all(l + r == m for l, r in splits)


class TestCombinatorics:
    def test_binomial(self):
        assert multiset_binomial(Multiset("aab"), Multiset("a")) == 2
        assert multiset_binomial(Multiset("aab"), EMPTY) == 1

    @given(multisets())
    def test_binomials_sum_to_power_of_two(self, m):
        assert sum(multiset_binomial(m, p) for p in m.submultisets()) == 2 ** len(m)

    def test_multisets_up_to(self):
        assert len(multisets_up_to(["a", "b"], 2)) == 6
        assert multisets_up_to(["a"], 0) == [EMPTY]

    def test_enumerate_L(self):
        found = enumerate_L(Multiset("aa"), Multiset("bc"))
        assert found == {Multiset([("a", "b"), ("a", "c")])}
        assert enumerate_L(Multiset("a"), Multiset("bc")) == set()

    @given(multisets(max_size=3), multisets(("x", "y"), max_size=3))
    def test_enumerate_L_marginals(self, m, p):
        for r in enumerate_L(m, p):
            assert Multiset(a for a, _ in r) == m
            assert Multiset(b for _, b in r) == p

    def test_multinomial(self):
        assert multiset_multinomial(Multiset("bb"), Multiset([("a", "b"), ("c", "b")])) == 2
        assert multiset_multinomial(Multiset("bb"), Multiset([("a", "b"), ("a", "b")])) == 1
        with pytest.raises(MarginalMismatch):
            multiset_multinomial(Multiset("b"), Multiset([("a", "c")]))


class TestLinComb:
    def test_rational_cancellation(self):
        s = LinComb([("x", 1), ("y", Fraction(1, 2))]) - LinComb.single("x")
        assert s.items() == (("y", Fraction(1, 2)),)

    def test_boolean_addition_saturates(self):
        s = LinComb([("x", 1), ("x", 1)], SemiringMode.BOOL)
        assert s.coeff("x") == 1

    def test_mode_violations(self):
        with pytest.raises(ModeViolation):
            SemiringMode.NAT.coerce(Fraction(1, 2))
        with pytest.raises(ModeViolation):
            SemiringMode.BOOL.coerce(-1)

    def test_bind_is_linear(self):
        s = LinComb([("x", 2), ("y", 1)])
        doubled = s.bind(lambda t: LinComb([(t + "'", 1), (t, 1)]))
        assert doubled.coeff("x'") == 2
        assert doubled.coeff("y") == 1
