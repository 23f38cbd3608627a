import numpy as np
import pytest
from hypothesis import given, settings

from helpers import complete, cycle, gnp, graphs, path, random_sizes
from jtapprox.chordal import check_chordal, extract_cliques
from jtapprox.errors import DomainError
from jtapprox.graph import Graph, StateSpace, with_edges
from jtapprox.oracle import exact_cliquewidth
from jtapprox.triangulate import (
    EscalationPolicy,
    escalate,
    greedy_min_weight,
    leaf_complete,
    triangulate,
    w_triangulate,
)


def _filled(graph, res):
    return with_edges(graph, res.fill_edges)


@given(graphs(min_n=1, max_n=9))
@settings(deadline=None)
def test_greedy_always_chordal(g):
    res = greedy_min_weight(g)
    assert res.succeeded
    assert check_chordal(_filled(g, res)).is_chordal
    assert sorted(res.ordering) == sorted(g.vertices)


def test_greedy_weighted_prefers_light_vertices():
    # the heavy hub makes eliminating leaves first strictly better
    g = Graph(range(4), [(0, 1), (0, 2), (0, 3)])
    ss = StateSpace({0: 16, 1: 2, 2: 2, 3: 2})
    res = greedy_min_weight(g, ss)
    # the hub may only go once at most one leaf is left (tie with the
    # final leaf is fine, the closed neighborhoods coincide then)
    assert set(res.ordering[:2]) <= {1, 2, 3}
    assert res.fill_edges == frozenset()
    assert res.largest_clique_size == 2


def test_triangulate_success_contract():
    g = cycle(8)
    res = triangulate(g, {0, 4}, 2)
    assert res.succeeded
    filled = _filled(g, res)
    assert check_chordal(filled).is_chordal
    assert filled.has_edge(0, 4)
    assert res.largest_clique_size < 10
    assert sorted(res.ordering) == sorted(g.vertices)


def test_triangulate_failure_is_sound():
    res = triangulate(complete(6), set(), 1)
    assert not res.succeeded
    assert exact_cliquewidth(complete(6)) > 1


def test_triangulate_validates_input():
    g = path(6)
    with pytest.raises(DomainError):
        triangulate(g, {99}, 1)
    with pytest.raises(DomainError):
        triangulate(g, set(), 0)
    with pytest.raises(DomainError):
        triangulate(g, {1, 2, 3}, 1)  # |W| must stay below (alpha+1)k
    with pytest.raises(DomainError):
        w_triangulate(g, set(), 1.0)  # needs a state space


def test_leaf_complete_cliques_w():
    g = path(5)
    fills = leaf_complete(g, {1, 5})
    filled = with_edges(g, fills)
    assert filled.has_edge(1, 5)
    assert check_chordal(filled).is_chordal


def test_escalate_ratio_on_contiguous_failure():
    g = complete(7)
    k, res = escalate(g)
    assert res.succeeded and k == 2.0
    assert res.ratio_bound == res.largest_clique_size / k
    assert res.largest_clique_size == 7


def test_escalate_policies_agree_on_bound():
    rng = np.random.default_rng(3)
    g = gnp(12, 0.4, rng)
    for jump in ("inc", "kstar"):
        k, res = escalate(g, policy=EscalationPolicy(jump=jump))
        assert res.succeeded
        assert res.largest_clique_size < 5 * k
        assert check_chordal(_filled(g, res)).is_chordal


def test_escalate_weighted_bound():
    rng = np.random.default_rng(4)
    g = gnp(10, 0.4, rng)
    ss = random_sizes(g, rng)
    m, res = escalate(g, ss=ss)
    assert res.succeeded
    filled = _filled(g, res)
    chord = check_chordal(filled)
    heaviest = max(ss.weight_of(c) for c in extract_cliques(filled, chord.peo))
    assert heaviest < 5 * m + 1e-9
    assert res.ratio_bound is None


def test_policy_validation():
    with pytest.raises(DomainError):
        EscalationPolicy(jump="sideways")
    with pytest.raises(DomainError):
        escalate(path(3), policy=EscalationPolicy(start=0))


@pytest.mark.parametrize("trial", range(15))
def test_random_small_graphs_triangulate_soundly(trial):
    rng = np.random.default_rng(6000 + trial)
    n = int(rng.integers(5, 10))
    g = gnp(n, float(rng.uniform(0.2, 0.8)), rng)
    opt = exact_cliquewidth(g)
    for k in range(1, n + 1):
        res = triangulate(g, set(), k)
        if res.succeeded:
            assert res.largest_clique_size < 5 * k
        else:
            assert opt > k
