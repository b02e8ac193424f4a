"""Hypothesis strategies for multisets, terms and matrices."""

import random

from hypothesis import strategies as st

from dillbench.algebra import Multiset
from dillbench.corpus import random_dterm, random_rterm


def multisets(elements=("a", "b", "c"), max_size: int = 4):
    return st.lists(st.sampled_from(elements), max_size=max_size).map(Multiset)


def seeds():
    return st.integers(min_value=0, max_value=10_000)


def rterms(depth: int = 3):
    return seeds().map(lambda s: random_rterm(random.Random(s), depth))


def dterms(depth: int = 3):
    return seeds().map(lambda s: random_dterm(random.Random(s), depth))
