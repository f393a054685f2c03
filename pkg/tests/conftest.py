from __future__ import annotations

from itertools import combinations
from pathlib import Path

import pytest
from hypothesis import strategies as st

from kdefect.graph import Graph

DATA = Path(__file__).resolve().parents[1] / "src" / "kdefect" / "data"
SIX = DATA / "six_vertex.edges"


def complete(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def empty(n: int) -> Graph:
    return Graph.from_edges(n, [])


def without(g: Graph, *pairs) -> Graph:
    drop = {tuple(sorted(p)) for p in pairs}
    return Graph.from_edges(g.n, [e for e in g.edges() if e not in drop])


SIX_EDGES = [(1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 6), (5, 6)]


def six_vertex() -> Graph:
    """The six-vertex example with ``v_i`` as vertex ``i - 1``."""
    return Graph.from_edges(6, [(a - 1, b - 1) for a, b in SIX_EDGES])


@pytest.fixture
def six_graph() -> Graph:
    return six_vertex()


@st.composite
def graphs(draw, min_n: int = 0, max_n: int = 10) -> Graph:
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, keep in zip(pairs, chosen) if keep])
