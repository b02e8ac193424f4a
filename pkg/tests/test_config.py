"""Tests for configuration loading."""

import json

import pytest
from pydantic import ValidationError

from dillbench.algebra import SemiringMode
from dillbench.config import RunConfig, Valuation, load_config, load_valuation
from dillbench.errors import UnknownAtom


def test_defaults():
    config = load_config()
    assert config.fuel == 10000
    assert config.strategy == "leftmost-innermost"
    assert config.degree == 3
    assert config.mode is SemiringMode.RAT
    assert not config.reduce_inside_boxes


def test_fuel_from_environment(monkeypatch):
    monkeypatch.setenv("DILL_FUEL_DEFAULT", "50")
    assert load_config().fuel == 50


def test_file_from_environment(monkeypatch, tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("degree: 1\nstrategy: random\nseed: 4\n")
    monkeypatch.setenv("DILL_CONFIG", str(path))
    config = load_config()
    assert (config.degree, config.strategy, config.seed) == (1, "random", 4)


def test_overrides_win_and_none_is_ignored(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("degree: 1\nfuel: 7\n")
    config = load_config(str(path), degree=2, fuel=None)
    assert (config.degree, config.fuel) == (2, 7)


def test_empty_file(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("")
    assert load_config(str(path)) == RunConfig()


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_config(str(tmp_path / "missing.yaml"))


@pytest.mark.parametrize("data", [
    {"strategy": "random"},
    {"strategy": "single"},
    {"strategy": "outermost"},
    {"degree": -1},
    {"fuel": 0},
    {"headroom": 4, "max_headroom": 2},
])
def test_invalid(data):
    with pytest.raises(ValidationError):
        RunConfig(**data)


class TestValuation:
    def test_web(self, valuation):
        assert valuation.web("a") == ("p", "q")
        with pytest.raises(UnknownAtom):
            valuation.web("c")

    def test_points_are_distinct(self):
        with pytest.raises(ValidationError):
            Valuation(atoms={"a": ["p", "p"]})

    def test_uniform(self):
        assert Valuation.uniform(["a", "b"], 2).atoms == {"a": ["p0", "p1"], "b": ["p0", "p1"]}

    def test_load(self, tmp_path):
        path = tmp_path / "v.json"
        path.write_text(json.dumps({"atoms": {"a": ["x", "y", "z"]}}))
        assert load_valuation(str(path)).web("a") == ("x", "y", "z")
        assert RunConfig(valuation=str(path)).load_valuation().web("a") == ("x", "y", "z")
        assert RunConfig().load_valuation() == Valuation()
