"""Shared instance builders for the test suite."""

from __future__ import annotations

import numpy as np
from hypothesis import strategies as st

from jtapprox.graph import Graph, StateSpace


def gnp(n: int, p: float, rng: np.random.Generator) -> Graph:
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph(range(n), edges)


def random_sizes(graph: Graph, rng: np.random.Generator, choices=(2, 3, 4)) -> StateSpace:
    return StateSpace({v: int(rng.choice(choices)) for v in sorted(graph.vertices)})


def cycle(n: int) -> Graph:
    return Graph(range(n), [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    return Graph(range(n), [(i, j) for i in range(n) for j in range(i + 1, n)])


def path(n: int) -> Graph:
    return Graph(range(1, n + 1), [(i, i + 1) for i in range(1, n)])


def random_tree(n: int, rng: np.random.Generator) -> Graph:
    edges = [(int(rng.integers(0, i)), i) for i in range(1, n)]
    return Graph(range(n), edges)


@st.composite
def graphs(draw, min_n: int = 1, max_n: int = 8):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(range(n), [e for e, k in zip(pairs, keep) if k])


@st.composite
def weighted_graphs(draw, min_n: int = 1, max_n: int = 7, sizes=(2, 3, 4)):
    g = draw(graphs(min_n=min_n, max_n=max_n))
    ss = StateSpace(
        {v: draw(st.sampled_from(sizes)) for v in sorted(g.vertices)}
    )
    return g, ss
