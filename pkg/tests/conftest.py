"""Shared fixtures."""

import pytest

from dillbench.config import Valuation
from dillbench.laws import sample_web


@pytest.fixture
def valuation() -> Valuation:
    return Valuation(atoms={"a": ["p", "q"], "b": ["r"]})


@pytest.fixture
def web2():
    return sample_web(2)


@pytest.fixture(autouse=True)
def _no_config_env(monkeypatch):
    monkeypatch.delenv("DILL_CONFIG", raising=False)
    monkeypatch.delenv("DILL_FUEL_DEFAULT", raising=False)

