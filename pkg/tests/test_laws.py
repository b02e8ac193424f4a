"""Tests for the law suites."""

import json

import pytest

from dillbench.errors import UnknownSuite
from dillbench.laws import SUITES, Law, check_law, iter_laws, run_suite, sample_web, suite_models
from dillbench.wrel import identity, zero


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite_holds(name):
    results = run_suite(name, web_size=1, degree=2, seed=0, samples=1)
    assert results
    failed = [(r.law, r.model, r.counterexample) for r in results if not r.ok]
    assert failed == []


@pytest.mark.parametrize("name", ["ftc", "ji", "comonad"])
def test_suite_holds_on_a_wider_web(name):
    results = run_suite(name, web_size=2, degree=2, model="wrel", seed=1, samples=1)
    assert all(r.ok for r in results)


def test_models_of_a_suite():
    assert suite_models("bialgebra", "both") == ("rel", "wrel")
    assert suite_models("taylor", "both") == ("wrel",)
    assert suite_models("seely", "rel") == ("rel",)


@pytest.mark.parametrize("name, model", [("nope", "both"), ("taylor", "rel"), ("ji", "rel")])
def test_unknown_suite(name, model):
    with pytest.raises(UnknownSuite):
        run_suite(name, model=model)


def test_samples_depend_only_on_the_seed():
    def names(seed):
        return [law.name for _, law in iter_laws("poincare", 1, 2, "wrel", seed, 2)]

    assert names(3) == names(3)
    assert len(names(3)) == 2


def test_failing_law_reports_a_counterexample():
    x = sample_web(1)
    law = Law("Id = 0", lambda b: (identity(x), zero(x, x)), headroom=0)
    found = json.loads(check_law(law, 2))
    assert found == {"row": "a0", "col": "a0", "lhs": "1", "rhs": "0"}


def test_results_carry_the_suite_name():
    results = run_suite("ftc", web_size=1, degree=1, model="wrel")
    assert {(r.suite, r.model) for r in results} == {("ftc", "wrel")}
