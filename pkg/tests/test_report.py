"""Tests for the plain-text reports."""

from dillbench.config import RunConfig
from dillbench.invariance import InvarianceCase
from dillbench.laws import LawResult
from dillbench.report import render_invariance, render_laws, render_trace


def test_trace_header():
    config = RunConfig(strategy="random", seed=7, fuel=20)
    text = render_trace(config, "(; <w:?a | cw:!~a>)", "(;)", ["#1 W-CW @cut0 : <w:?a | cw:!~a>"])
    assert text.splitlines() == [
        "# strategy: random seed: 7",
        "# fuel: 20 inside-boxes: false",
        "# source: (; <w:?a | cw:!~a>)",
        "# steps: 1",
        "#1 W-CW @cut0 : <w:?a | cw:!~a>",
        "(;)",
    ]


def test_trace_lists_single_rules():
    config = RunConfig(strategy="single", rules=["ax", "d-cd"])
    text = render_trace(config, "src", "nf", [])
    assert "# rules: ax, d-cd" in text.splitlines()


def test_invariance_report():
    cases = [
        InvarianceCase("identity", "rel", 0, True),
        InvarianceCase("broken", "wrel", 2, False, "after step 2 (ax): differs", 1),
    ]
    lines = render_invariance(RunConfig(seed=3), cases).splitlines()
    assert lines[0] == "# check-invariance on bundled corpus"
    assert lines[1] == "# strategy: leftmost-innermost seed: 3"
    assert "ok   identity [rel] steps=0" in lines
    assert "FAIL broken [wrel] steps=2 after step 2 (ax): differs" in lines
    assert lines[-1] == "# 1/2 passed"


def test_laws_report():
    results = [LawResult("ftc", "J = Id", "rel", True)]
    lines = render_laws(results, 1, 2, 0, 3).splitlines()
    assert lines[0] == "# check-laws web: 1 degree: 2 seed: 0 samples: 3"
    assert lines[1] == "ok   ftc/J = Id [rel]"
    assert lines[-1] == "# 1/1 passed"
