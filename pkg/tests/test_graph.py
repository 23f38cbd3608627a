import pytest
from hypothesis import given

from helpers import complete, graphs, path
from jtapprox.errors import DomainError, ParseError
from jtapprox.graph import (
    Graph,
    StateSpace,
    add_clique_edges,
    connected_components,
    edge,
    format_graph,
    format_state_space,
    induced_subgraph,
    is_simplicial,
    parse_graph,
    parse_state_space,
    strip_simplicial,
    with_edges,
)


def test_graph_construction_normalizes():
    g = Graph([1, 2, 3], [(1, 2), (2, 1), (2, 3)])
    assert g.n == 3 and g.m == 2
    assert g.has_edge(2, 1)
    assert list(g.edges()) == [(1, 2), (2, 3)]


def test_graph_rejects_bad_edges():
    with pytest.raises(DomainError):
        Graph([1, 2], [(1, 1)])
    with pytest.raises(DomainError):
        Graph([1, 2], [(1, 3)])
    with pytest.raises(DomainError):
        Graph([1]).neighbors(9)


def test_parse_graph_basic():
    g = parse_graph("c comment\np tw 4 3\n1 2\n2 3\n3 4\n")
    assert g.n == 4 and g.m == 3
    assert g.has_edge(2, 3) and not g.has_edge(1, 3)


@pytest.mark.parametrize(
    "text",
    [
        "",
        "1 2\n",
        "p tw 2 1\np tw 2 1\n1 2\n",
        "p tw 2 1\n1 1\n",
        "p tw 2 1\n1 3\n",
        "p tw 2 2\n1 2\n",
        "p tw 2 1\n1 2 3\n",
        "p tw x y\n",
    ],
)
def test_parse_graph_rejects(text):
    with pytest.raises(ParseError):
        parse_graph(text)


def test_parse_state_space_defaults_and_rejects():
    g = parse_graph("p tw 3 2\n1 2\n2 3\n")
    ss = parse_state_space("1 4\n", g)
    assert ss.size(1) == 4 and ss.size(2) == 2 and ss.size(3) == 2
    with pytest.raises(ParseError):
        parse_state_space("9 4\n", g)
    with pytest.raises(ParseError):
        parse_state_space("1 1\n", g)


@given(graphs(max_n=9))
def test_format_parse_roundtrip(g):
    shifted = Graph(
        [v + 1 for v in g.vertices], [(u + 1, v + 1) for u, v in g.edges()]
    )
    assert parse_graph(format_graph(shifted)) == shifted


def test_state_space_weights():
    ss = StateSpace({1: 2, 2: 4, 3: 8})
    assert ss.weight(1) == 1.0 and ss.weight(3) == 3.0
    assert ss.weight_of({1, 2, 3}) == 6.0
    assert parse_state_space(format_state_space(ss), Graph([1, 2, 3])).items()
    with pytest.raises(DomainError):
        StateSpace({1: 1})


def test_induced_subgraph_and_components():
    g = Graph(range(6), [(0, 1), (1, 2), (3, 4)])
    sub = induced_subgraph(g, {0, 1, 3, 4})
    assert sub.m == 2 and sub.has_edge(0, 1) and sub.has_edge(3, 4)
    comps = connected_components(g)
    assert sorted(sorted(c) for c in comps) == [[0, 1, 2], [3, 4], [5]]


def test_simplicial_detection():
    g = Graph(range(4), [(0, 1), (0, 2), (1, 2), (2, 3)])
    assert is_simplicial(g, 3)
    assert is_simplicial(g, 0)
    assert not is_simplicial(g, 2)


def test_strip_simplicial_chordal_graph_empties():
    residual, order = strip_simplicial(path(6))
    assert residual.n == 0
    assert sorted(order) == list(range(1, 7))


def test_strip_simplicial_keeps_cycle():
    g = Graph(range(5), [(0, 1), (1, 2), (2, 3), (3, 0), (3, 4)])
    residual, order = strip_simplicial(g)
    assert order == [4]
    assert residual.vertices == frozenset({0, 1, 2, 3})


def test_add_clique_edges():
    g = path(4)
    cliqued, added = add_clique_edges(g, {1, 2, 3})
    assert added == frozenset({(1, 3)})
    assert cliqued.has_edge(1, 3)
    again, none_added = add_clique_edges(cliqued, {1, 2, 3})
    assert none_added == frozenset() and again is cliqued
    with pytest.raises(DomainError):
        add_clique_edges(g, {1, 99})


@given(graphs(max_n=8))
def test_with_edges_only_adds(g):
    extra = [(u, v) for u in sorted(g.vertices) for v in sorted(g.vertices) if u < v]
    filled = with_edges(g, extra)
    assert filled.m == len(extra)
    for u, v in g.edges():
        assert filled.has_edge(u, v)


def test_edge_normalizes():
    assert edge(5, 2) == (2, 5) and edge(2, 5) == (2, 5)


def test_complete_graph_shape():
    g = complete(5)
    assert g.m == 10 and all(g.degree(v) == 4 for v in g.vertices)
