"""Tests for the differential λ-calculus."""

import pytest

from dillbench.differential import alpha_normal_comb, normalize_dterm, step_comb
from dillbench.errors import FuelExhausted
from dillbench.parser import parse_dterm


def nf(text):
    return normalize_dterm(parse_dterm(text))


def same(text):
    return alpha_normal_comb(parse_dterm(text))


def test_beta():
    assert nf("(\\x. x) y") == same("y")


def test_derivative_of_a_constant_vanishes():
    assert not nf("(D (\\x. y) . z) w")


def test_derivative_of_the_identity():
    assert nf("D (\\x. x) . z") == same("\\x. z")


def test_derivative_through_an_application():
    assert nf("D (\\x. (f) x) . z") == same("\\x. (D f . z) x")


def test_directions_commute():
    assert parse_dterm("D (D f . u) . v") == parse_dterm("D (D f . v) . u")


def test_normal_terms_do_not_step():
    assert step_comb(parse_dterm("\\x. (f) x")) is None


def test_fuel():
    omega = parse_dterm("(\\x. (x) x) (\\x. (x) x)")
    with pytest.raises(FuelExhausted):
        normalize_dterm(omega, fuel=5)

