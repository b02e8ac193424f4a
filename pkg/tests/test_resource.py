"""Tests for the resource calculus, Taylor expansion and antiderivatives."""

import pytest

from dillbench.errors import NotLinearInH, SymmetryViolation
from dillbench.parser import parse_dterm, parse_rterm
from dillbench.resource import (
    alpha_normal_comb,
    antiderivative_check,
    deg,
    euler_check,
    normalize_resource,
    symmetrize,
    taylor_expand,
)


def rterm(text):
    (t, c), = parse_rterm(text).items()
    assert c == 1
    return t


def same(text):
    return alpha_normal_comb(parse_rterm(text))


class TestReduction:
    def test_bunch_is_shared_out_over_occurrences(self):
        assert normalize_resource(parse_rterm("<\\x. <y>[x, x]>[a, b]")) == same("2 * <y>[a, b]")

    def test_size_mismatch_vanishes(self):
        assert not normalize_resource(parse_rterm("<\\x. <y>[x]>[a, b]"))
        assert not normalize_resource(parse_rterm("<\\x. y>[a]"))

    def test_empty_bunch(self):
        assert normalize_resource(parse_rterm("<\\x. y>[]")) == same("y")

    def test_degree(self):
        assert deg(rterm("<f>[x, <x>[y]]"), "x") == 2
        assert deg(rterm("\\x. x"), "x") == 0


class TestTaylor:
    def test_application(self):
        got = taylor_expand(parse_dterm("(x) y"), 2)
        assert got == parse_rterm("<x>[] + <x>[y] + 1/2 * <x>[y, y]")

    def test_multiplicity_zero(self):
        assert taylor_expand(parse_dterm("(x) y"), 0) == parse_rterm("<x>[]")

    def test_differential_application_is_linear(self):
        got = taylor_expand(parse_dterm("(D x . u) y"), 1)
        assert got == parse_rterm("<x>[u] + <x>[u, y]")


class TestAntiderivative:
    def test_linear_term(self):
        assert antiderivative_check(parse_rterm("<f>[x, h]"), "x") == same("1/2 * <f>[x, x]")

    def test_needs_one_occurrence_of_the_direction(self):
        with pytest.raises(NotLinearInH):
            antiderivative_check(parse_rterm("<f>[x, x]"), "x")

    def test_asymmetric_term(self):
        with pytest.raises(SymmetryViolation):
            antiderivative_check(parse_rterm("<x>[h]"), "x")

    def test_symmetrized_term_has_an_antiderivative(self):
        u = symmetrize(parse_rterm("<x>[h]"), "x")
        antiderivative_check(u, "x")

    @pytest.mark.parametrize("text", ["<f>[x, x]", "<x>[<x>[y]]", "\\y. <y>[x]", "f"])
    def test_euler(self, text):
        assert euler_check(rterm(text), "x")
