from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from graphcode.graph import Graph
from graphcode.perm import Permutation

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA


@st.composite
def permutations(draw, min_n: int = 0, max_n: int = 8, n: int | None = None) -> Permutation:
    size = draw(st.integers(min_n, max_n)) if n is None else n
    return Permutation(tuple(draw(st.permutations(range(1, size + 1)))))


@st.composite
def graphs(draw, min_n: int = 1, max_n: int = 7, colored: bool = False) -> Graph:
    n = draw(st.integers(min_n, max_n))
    pairs = [(v, w) for v in range(1, n + 1) for w in range(v + 1, n + 1)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    colors = draw(st.lists(st.integers(0, 3), min_size=n, max_size=n)) if colored else None
    return Graph.from_edges(n, [e for e, keep in zip(pairs, mask) if keep], colors)
