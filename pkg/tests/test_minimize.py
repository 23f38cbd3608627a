import numpy as np
import pytest

from helpers import cycle, gnp, random_sizes
from jtapprox.chordal import build_junction_tree, check_chordal, compute_metrics, extract_cliques
from jtapprox.errors import DomainError
from jtapprox.graph import StateSpace, with_edges
from jtapprox.minimize import minimize_fill
from jtapprox.triangulate import greedy_min_weight


def test_empty_fills_identity():
    g = cycle(4)
    fills = [(0, 2)]
    rep = minimize_fill(with_edges(g, fills), [], [0, 1, 2, 3])
    assert rep.removed == frozenset() and rep.kept == frozenset()
    assert rep.passes == 1


def test_cliqued_square_keeps_one_chord():
    g = cycle(4)
    rep = minimize_fill(g, [(0, 2), (1, 3)], [0, 1, 2, 3])
    assert len(rep.kept) == 1 and len(rep.removed) == 1
    assert rep.kept | rep.removed == {(0, 2), (1, 3)}
    assert check_chordal(with_edges(g, rep.kept)).is_chordal


def test_rejects_non_chordal_input():
    with pytest.raises(DomainError):
        minimize_fill(cycle(5), [], [0, 1, 2, 3, 4])


def test_rejects_bad_ordering():
    g = cycle(4)
    with pytest.raises(DomainError):
        minimize_fill(g, [(0, 2)], [0, 1, 2])
    with pytest.raises(DomainError):
        minimize_fill(g, [(0, 2)], [0, 1, 2, 2])


@pytest.mark.parametrize("trial", range(25))
def test_minimization_is_minimal(trial):
    rng = np.random.default_rng(7000 + trial)
    n = int(rng.integers(4, 13))
    g = gnp(n, float(rng.uniform(0.15, 0.6)), rng)
    res = greedy_min_weight(g)
    rep = minimize_fill(g, res.fill_edges, res.ordering)
    assert rep.removed | rep.kept == res.fill_edges
    assert not rep.removed & rep.kept
    final = with_edges(g, rep.kept)
    assert check_chordal(final).is_chordal
    for e in rep.kept:
        assert not check_chordal(with_edges(g, rep.kept - {e})).is_chordal


@pytest.mark.parametrize("trial", range(10))
def test_minimization_never_raises_metrics(trial):
    rng = np.random.default_rng(7100 + trial)
    g = gnp(10, 0.4, rng)
    ss = random_sizes(g, rng)
    res = greedy_min_weight(g, ss)
    rep = minimize_fill(g, res.fill_edges, res.ordering)

    def metrics(fills):
        filled = with_edges(g, fills)
        chord = check_chordal(filled)
        return compute_metrics(
            build_junction_tree(extract_cliques(filled, chord.peo)), ss
        )

    before = metrics(res.fill_edges)
    after = metrics(rep.kept)
    assert after.M <= before.M + 1e-9
    assert after.T <= before.T + 1e-9
