"""Tests for the command line."""

import json

import pytest
from typer.testing import CliRunner

from dillbench.cli import app
from dillbench.parser import parse_rterm

runner = CliRunner()


@pytest.fixture
def valuation_file(tmp_path):
    path = tmp_path / "valuation.json"
    path.write_text(json.dumps({"atoms": {"a": ["p", "q"]}}))
    return str(path)


def test_version():
    result = runner.invoke(app, ["--version"])
    assert result.exit_code == 0
    assert result.output.startswith("dill ")


class TestReduce:
    def test_normal_form(self):
        result = runner.invoke(app, ["reduce"], input="(; <w:?a | cw:!~a>)")
        assert result.exit_code == 0
        assert result.output.strip() == "(;)"

    def test_trace(self):
        result = runner.invoke(app, ["reduce", "--trace"], input="(; <w:?a | cw:!~a>)")
        assert result.exit_code == 0
        lines = result.output.splitlines()
        assert lines[0] == "# strategy: leftmost-innermost"
        assert lines[-2].startswith("#1 W-CW @cut0 : ")
        assert lines[-1] == "(;)"

    def test_input_file(self, tmp_path):
        path = tmp_path / "net.txt"
        path.write_text("(; <w:?a | cw:!~a>)\n")
        result = runner.invoke(app, ["reduce", "--in", str(path)])
        assert result.output.strip() == "(;)"

    def test_fuel_exhausted(self):
        result = runner.invoke(app, ["reduce", "--fuel", "1"], input="([x, ~y] ; <d(~x) | cd(y)>)")
        assert result.exit_code == 3

    def test_random_needs_a_seed(self):
        result = runner.invoke(app, ["reduce", "--strategy", "random"], input="(;)")
        assert result.exit_code == 2

    def test_parse_error(self):
        result = runner.invoke(app, ["reduce"], input="([x ;")
        assert result.exit_code == 2


def test_parse_canonical_form():
    result = runner.invoke(app, ["parse", "--kind", "type"], input="a tens (b par c)")
    assert result.exit_code == 0
    assert result.output.strip() == "a tens (b par c)"


def test_typecheck_rejects_a_clash():
    result = runner.invoke(app, ["typecheck"], input="(; <w:?a | cw:!a>)")
    assert result.exit_code == 1


def test_derive_not_found():
    result = runner.invoke(app, ["derive"], input="([] ; <x tens y | ~x par ~y>)")
    assert result.exit_code == 1
    assert "NOT-FOUND" in result.output


class TestEval:
    def test_weighted(self, valuation_file):
        result = runner.invoke(
            app, ["eval", "--types", "a, ~a", "--model", "wrel", "--valuation", valuation_file],
            input="2 * ([x, ~x] ;)",
        )
        assert result.exit_code == 0
        assert json.loads(result.output) == [
            {"point": ["p", "p"], "val": "2"},
            {"point": ["q", "q"], "val": "2"},
        ]

    def test_negative_coefficient_in_the_relational_model(self, valuation_file):
        result = runner.invoke(
            app, ["eval", "--types", "a, ~a", "--model", "rel", "--valuation", valuation_file],
            input="-1 * ([x, ~x] ;)",
        )
        assert result.exit_code == 1

    def test_unknown_model(self):
        result = runner.invoke(app, ["eval", "--model", "coh"], input="(;)")
        assert result.exit_code == 2


def test_taylor():
    result = runner.invoke(app, ["taylor", "-p", "1"], input="(x) y")
    assert result.exit_code == 0
    assert parse_rterm(result.output) == parse_rterm("<x>[] + <x>[y]")


def test_antiderive_resource_term():
    result = runner.invoke(app, ["antiderive", "--model", "resource", "--var", "x"], input="<f>[x, h]")
    assert result.exit_code == 0
    assert parse_rterm(result.output) == parse_rterm("1/2 * <f>[x, x]")


class TestChecks:
    def test_laws(self):
        result = runner.invoke(app, ["check-laws", "--suite", "ftc", "--web", "1", "--degree", "2"])
        assert result.exit_code == 0

    def test_unknown_suite(self):
        result = runner.invoke(app, ["check-laws", "--suite", "nope"])
        assert result.exit_code == 2

    def test_bundled_corpus(self, tmp_path):
        report = tmp_path / "report.txt"
        result = runner.invoke(app, ["check-invariance", "--degree", "2", "--report", str(report)])
        assert result.exit_code == 0
        lines = report.read_text().splitlines()
        assert lines[0] == "# check-invariance on bundled corpus"
        assert not [line for line in lines if line.startswith("FAIL")]
