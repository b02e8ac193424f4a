"""Configuration loading and Pydantic models."""

import json
import os
from pathlib import Path
from typing import Literal, Optional

import yaml
from pydantic import BaseModel, Field, field_validator, model_validator

from .algebra import SemiringMode

CONFIG_ENV = "DILL_CONFIG"
FUEL_ENV = "DILL_FUEL_DEFAULT"


def _default_fuel() -> int:
    return int(os.environ.get(FUEL_ENV, "10000"))


class Valuation(BaseModel):
    """Finite web of every atom; a dual atom shares the web of its atom."""

    atoms: dict[str, list[str]] = Field(default_factory=dict, description="Atom name to its points")

    @field_validator("atoms")
    @classmethod
    def _distinct_points(cls, atoms: dict[str, list[str]]) -> dict[str, list[str]]:
        for name, points in atoms.items():
            if len(set(points)) != len(points):
                raise ValueError(f"atom {name} lists a point twice")
        return atoms

    def web(self, atom: str) -> tuple[str, ...]:
        from .errors import UnknownAtom

        if atom not in self.atoms:
            raise UnknownAtom(f"atom {atom} has no web in the valuation")
        return tuple(self.atoms[atom])

    @classmethod
    def uniform(cls, names: list[str], size: int) -> "Valuation":
        """Every atom gets the points p0, ..., p(size-1)."""
        return cls(atoms={n: [f"p{i}" for i in range(size)] for n in names})


def load_valuation(path: str) -> Valuation:
    """Load a valuation from a JSON file such as ``{"atoms": {"a": ["p", "q"]}}``."""
    with open(Path(path).expanduser()) as f:
        return Valuation(**json.load(f))


class RunConfig(BaseModel):
    """Settings shared by every command."""

    mode: SemiringMode = Field(default=SemiringMode.RAT, description="Coefficient semiring")
    degree: int = Field(default=3, ge=0, description="Bound D on multiset sizes")
    fuel: int = Field(default_factory=_default_fuel, gt=0, description="Maximum reduction steps")
    strategy: Literal["leftmost-innermost", "random", "single"] = Field(
        default="leftmost-innermost", description="Redex selection strategy"
    )
    seed: Optional[int] = Field(default=None, description="Seed of the random strategy and generators")
    rules: list[str] = Field(default_factory=list, description="Rules fired by the single strategy")
    reduce_inside_boxes: bool = Field(default=False, description="Also reduce inside box contents")
    valuation: Optional[str] = Field(default=None, description="Path to a valuation JSON file")
    budget: int = Field(default=20000, gt=0, description="Goal budget of derivation search")
    headroom: int = Field(default=2, ge=0, description="Extra degree used before truncating")
    max_headroom: int = Field(default=8, ge=0, description="Give up on truncation stability past this")

    @model_validator(mode="after")
    def _check(self) -> "RunConfig":
        if self.strategy == "random" and self.seed is None:
            raise ValueError("strategy 'random' needs a seed")
        if self.strategy == "single" and not self.rules:
            raise ValueError("strategy 'single' needs at least one rule")
        if self.max_headroom < self.headroom:
            raise ValueError("max_headroom is below headroom")
        return self

    def load_valuation(self) -> Valuation:
        if self.valuation is None:
            return Valuation()
        return load_valuation(self.valuation)


def load_config(config_path: Optional[str] = None, **overrides: object) -> RunConfig:
    """Load configuration from a YAML file.

    Args:
        config_path: Path to a YAML file. If None, uses the DILL_CONFIG env var;
                     without either, the defaults are used.
        overrides: Values given on the command line; None entries are ignored.

    Returns:
        Validated RunConfig object
    """
    if config_path is None:
        config_path = os.environ.get(CONFIG_ENV)

    data: dict = {}
    if config_path is not None:
        path = Path(config_path).expanduser()
        if not path.exists():
            raise FileNotFoundError(f"Config not found: {path}")
        with open(path) as f:
            data = yaml.safe_load(f) or {}

    data.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**data)
