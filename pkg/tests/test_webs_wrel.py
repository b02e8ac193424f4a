"""Tests for webs and the weighted model."""

import random
from fractions import Fraction

import pytest

from dillbench.algebra import EMPTY, Multiset, SemiringMode
from dillbench.errors import DegreeExceedsBound, ModeViolation, SymmetryViolation, WebMismatch
from dillbench.laws import sample_web, symmetric_sample
from dillbench.typecheck import Atom, CoAtom, Excl, ParType, Quest, TensType
from dillbench.webs import ExclWeb, denote_type, encode_point, excl, pair_web, point_degree
from dillbench.wrel import (
    I,
    J,
    WMorphism,
    coder,
    coderc,
    compose,
    der,
    fundamental_theorem_check,
    identity,
    check_symmetric,
    poincare_antiderivative,
    poly_degree,
    taylor_T,
    w_excl,
    w_fun,
)


class TestWebs:
    def test_atom_and_dual_share_a_web(self, valuation):
        assert denote_type(Atom("a"), valuation, 2).points == ("p", "q")
        assert denote_type(CoAtom("a"), valuation, 2).points == ("p", "q")

    def test_point_counts(self, valuation):
        assert len(denote_type(TensType(Atom("a"), Atom("b")), valuation, 2)) == 2
        assert len(denote_type(ParType(Atom("a"), Atom("a")), valuation, 2)) == 4
        # multisets of size 0, 1, 2 over two points
        assert len(denote_type(Excl(Atom("a")), valuation, 2)) == 6
        assert len(denote_type(Quest(Atom("b")), valuation, 3)) == 4

    def test_exponential_membership(self, valuation):
        web = denote_type(Excl(Atom("a")), valuation, 1)
        assert isinstance(web, ExclWeb)
        assert Multiset(["p"]) in web
        assert Multiset(["p", "q"]) not in web
        assert Multiset(["r"]) not in web

    def test_point_degree(self):
        assert point_degree("p") == 0
        assert point_degree((Multiset(["p", "p"]), "q")) == 2
        assert point_degree(Multiset([Multiset(["p", "q", "q"])])) == 3

    def test_encode_point(self):
        assert encode_point((Multiset(["p"]), ("q", "r"))) == [{"ms": ["p"]}, ["q", "r"]]
        assert encode_point(EMPTY) == {"ms": []}


class TestMatrices:
    def test_dereliction_after_codereliction(self, web2):
        assert compose(der(web2, 2), coder(web2, 2)) == identity(web2)

    def test_composition_checks_webs(self, web2):
        with pytest.raises(WebMismatch):
            compose(der(web2, 2), der(web2, 2))

    def test_subtraction_needs_rationals(self, web2):
        m = identity(web2, SemiringMode.BOOL)
        with pytest.raises(ModeViolation):
            m - m

    def test_boolean_mode_saturates(self, web2):
        m = identity(web2, SemiringMode.BOOL)
        assert (m + m)[("a0", "a0")] == 1

    def test_excl_is_functorial(self, web2):
        f = WMorphism(web2, web2, {("a0", "a1"): 2, ("a1", "a1"): 1})
        g = WMorphism(web2, web2, {("a1", "a0"): Fraction(1, 2)})
        assert w_excl(compose(g, f), 2) == compose(w_excl(g, 2), w_excl(f, 2))
        assert w_excl(identity(web2), 2) == identity(excl(web2, 2))

    def test_fun_of_a_power_series(self, web2):
        # one output point, reading the coefficient of [a0, a0]
        y = sample_web(1, "b")
        m = WMorphism(excl(web2, 2), y, {(Multiset(["a0", "a0"]), "b0"): 3})
        assert w_fun(m, {"a0": 2, "a1": 5}, 2) == {"b0": 12}


class TestDifferentialStructure:
    def test_j_is_diagonal(self, web2):
        j = J(web2, 3)
        for p in excl(web2, 3).points:
            assert j[(p, p)] == len(p) + 1
        assert len(j) == len(excl(web2, 3))

    def test_i_inverts_j(self, web2):
        assert compose(J(web2, 3), I(web2, 3)) == identity(excl(web2, 3))

    @pytest.mark.parametrize("bound", [1, 2, 3])
    def test_fundamental_theorem(self, web2, bound):
        assert fundamental_theorem_check(web2, bound) is None

    def test_taylor_operator_is_the_identity_at_full_order(self, web2):
        assert taylor_T(web2, 2, 2) == identity(excl(web2, 2))

    def test_poly_degree(self, web2):
        y = sample_web(1, "b")
        linear = WMorphism(excl(web2, 3), y, {(Multiset(["a0"]), "b0"): 1})
        assert poly_degree(linear, 3) == 1
        with pytest.raises(DegreeExceedsBound):
            poly_degree(linear, 4)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_antiderivative(self, web2, seed):
        y = sample_web(1, "b")
        f = symmetric_sample(web2, y, 2, SemiringMode.RAT, random.Random(seed))
        g = poincare_antiderivative(f)
        assert compose(g, coderc(web2, 3)).restrict(f.source).first_difference(f) is None

    def test_asymmetric_matrix_is_rejected(self, web2):
        y = sample_web(1, "b")
        f = WMorphism(pair_web(excl(web2, 1), web2), y, {
            ((EMPTY, "a0"), "b0"): 1,
            ((Multiset(["a0"]), "a1"), "b0"): 1,
        })
        with pytest.raises(SymmetryViolation):
            check_symmetric(f, web2, 1)
        with pytest.raises(SymmetryViolation):
            poincare_antiderivative(f)

    def test_antiderivative_needs_a_differential_source(self, web2):
        with pytest.raises(WebMismatch):
            poincare_antiderivative(identity(web2))
