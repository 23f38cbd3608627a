import networkx as nx
import numpy as np
import pytest
from hypothesis import given

from helpers import complete, cycle, gnp, graphs, path
from jtapprox.chordal import (
    build_junction_tree,
    check_chordal,
    compute_metrics,
    extract_cliques,
    format_td,
    is_chordless_cycle,
    parse_td,
    verify_junction_tree,
    verify_peo,
)
from jtapprox.errors import DomainError, ParseError
from jtapprox.graph import Graph, StateSpace, with_edges


def _nx(g):
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges())
    return h


def test_path_and_complete_are_chordal():
    for g in (path(6), complete(5), Graph([1])):
        r = check_chordal(g)
        assert r.is_chordal and verify_peo(g, r.peo)


@pytest.mark.parametrize("n", range(4, 10))
def test_cycles_are_not_chordal(n):
    r = check_chordal(cycle(n))
    assert not r.is_chordal
    assert is_chordless_cycle(cycle(n), r.witness_cycle)
    assert len(r.witness_cycle) >= 4


@given(graphs(max_n=9))
def test_chordality_matches_networkx(g):
    ours = check_chordal(g).is_chordal
    theirs = nx.is_chordal(_nx(g))
    assert ours == theirs


@given(graphs(max_n=8))
def test_witness_cycles_are_real(g):
    r = check_chordal(g)
    if not r.is_chordal:
        assert is_chordless_cycle(g, r.witness_cycle)


def test_verify_peo_rejects_bad_order():
    g = with_edges(cycle(4), [(0, 2)])
    r = check_chordal(g)
    assert r.is_chordal
    assert verify_peo(g, r.peo)
    # eliminating the shared edge's endpoint first exposes the missing
    # 1-3 chord between its remaining neighbors
    assert not verify_peo(g, (0, 1, 2, 3))
    assert not verify_peo(g, (2, 0, 1, 3))
    # C4 itself admits no perfect elimination ordering at all
    for order in ((0, 1, 2, 3), (3, 2, 1, 0)):
        assert not verify_peo(cycle(4), order)


@given(graphs(max_n=8))
def test_extract_cliques_match_networkx(g):
    r = check_chordal(g)
    if not r.is_chordal:
        return
    ours = {frozenset(c) for c in extract_cliques(g, r.peo)}
    theirs = {frozenset(c) for c in nx.find_cliques(_nx(g))} if g.n else set()
    assert ours == theirs


def test_junction_tree_of_two_triangles():
    g = Graph(range(4), [(0, 1), (1, 2), (0, 2), (1, 3), (2, 3)])
    r = check_chordal(g)
    jt = build_junction_tree(extract_cliques(g, r.peo))
    assert len(jt.bags) == 2 and jt.is_tree
    assert jt.separator(*jt.tree_edges[0]) == frozenset({1, 2})
    ok, why = verify_junction_tree(jt, g)
    assert ok, why


def test_junction_tree_forest_vs_forced():
    g = Graph(range(4), [(0, 1), (2, 3)])
    cliques = extract_cliques(g, check_chordal(g).peo)
    forest = build_junction_tree(cliques)
    assert not forest.is_tree and verify_junction_tree(forest, g)[0]
    tree = build_junction_tree(cliques, force_tree=True)
    assert tree.is_tree and verify_junction_tree(tree, g)[0]


def test_junction_tree_rejects_duplicates():
    with pytest.raises(DomainError):
        build_junction_tree([frozenset({1, 2}), frozenset({1, 2})])


def test_verify_junction_tree_catches_broken_rip():
    from jtapprox.chordal import JunctionTree

    bags = (frozenset({1, 2}), frozenset({2, 3}), frozenset({1, 3}))
    jt = JunctionTree(bags, ((0, 1), (1, 2)))
    ok, why = verify_junction_tree(jt)
    assert not ok and "not connected" in why


def test_metrics_hand_example():
    jt = build_junction_tree([frozenset({1, 2}), frozenset({2, 3})])
    ss = StateSpace({1: 2, 2: 4, 3: 8})
    m = compute_metrics(jt, ss)
    # bag weights are 3 and 5; totals 2^3 + 2^5 = 40
    assert m.M == pytest.approx(5.0)
    assert m.T == pytest.approx(np.log2(40.0))
    assert m.largest_bag_size == 2


def test_metrics_missing_size_rejected():
    jt = build_junction_tree([frozenset({1, 2})])
    with pytest.raises(DomainError):
        compute_metrics(jt, StateSpace({1: 2}))


@given(graphs(max_n=8))
def test_td_roundtrip(g):
    r = check_chordal(g)
    if not r.is_chordal or g.n == 0:
        return
    shifted = Graph([v + 1 for v in g.vertices], [(u + 1, v + 1) for u, v in g.edges()])
    rs = check_chordal(shifted)
    jt = build_junction_tree(extract_cliques(shifted, rs.peo))
    jt2, n = parse_td(format_td(jt, shifted.n))
    assert n == shifted.n
    assert jt2.bags == jt.bags
    assert jt2.tree_edges == jt.tree_edges


@pytest.mark.parametrize(
    "text",
    ["", "b 1 1 2\n", "s td 1 2 2\ns td 1 2 2\n", "s td 2 2 2\nb 1 1\n1 2\n"],
)
def test_td_parse_rejects(text):
    with pytest.raises(ParseError):
        parse_td(text)
