import numpy as np
import pytest

from helpers import cycle, gnp, path, random_sizes
from jtapprox.cuts import (
    INFINITE,
    CapacityAssignment,
    StCutSolver,
    min_st_vertex_cut,
    separates,
    three_way_cut_2approx,
)
from jtapprox.errors import DomainError
from jtapprox.graph import Graph
from jtapprox.oracle import (
    exhaustive_min_st_vertex_cut,
    max_vertex_disjoint_paths,
    optimal_three_way_cut,
)


def test_chain_cut_is_middle():
    g = path(5)
    r = min_st_vertex_cut(g, {1}, {5}, CapacityAssignment.unit(g))
    assert r.weight == 1.0 and len(r.cut) == 1 and r.cut < {2, 3, 4}
    assert separates(g, r.cut, [{1}, {5}])


def test_adjacent_terminals_have_no_cut():
    g = path(2)
    assert min_st_vertex_cut(g, {1}, {2}, CapacityAssignment.unit(g)) is None


def test_cut_respects_capacities():
    # the cheap middle vertex is priced out, cut goes through the other
    g = Graph(range(4), [(0, 1), (1, 3), (0, 2), (2, 3)])
    cap = CapacityAssignment({0: 1.0, 1: 10.0, 2: 1.0, 3: 1.0})
    r = min_st_vertex_cut(g, {0}, {3}, cap)
    assert r.weight == 11.0 and r.cut == {1, 2}


def test_infinite_vertices_never_cut():
    g = cycle(6)
    cap = CapacityAssignment.unit(g).with_infinite([1])
    r = min_st_vertex_cut(g, {0}, {3}, cap)
    assert r is not None and 1 not in r.cut
    assert separates(g, r.cut, [{0}, {3}])


def test_solver_reuse_matches_one_shot():
    rng = np.random.default_rng(7)
    g = gnp(9, 0.35, rng)
    cap = CapacityAssignment.unit(g)
    solver = StCutSolver(g, cap)
    verts = sorted(g.vertices)
    for s in verts[:3]:
        for t in verts[-3:]:
            if s == t or g.has_edge(s, t):
                continue
            a = solver.min_cut({s}, {t})
            b = min_st_vertex_cut(g, {s}, {t}, cap)
            assert (a is None) == (b is None)
            if a is not None:
                assert a.cut == b.cut and a.weight == b.weight


def test_limit_semantics():
    g = path(5)
    cap = CapacityAssignment.unit(g)
    solver = StCutSolver(g, cap)
    assert solver.min_cut({1}, {5}, limit=0.5) is None
    r = solver.min_cut({1}, {5}, limit=1.0)
    assert r is not None and r.weight == 1.0


def test_terminal_validation():
    g = path(3)
    cap = CapacityAssignment.unit(g)
    with pytest.raises(DomainError):
        min_st_vertex_cut(g, set(), {1}, cap)
    with pytest.raises(DomainError):
        min_st_vertex_cut(g, {1}, {1}, cap)
    with pytest.raises(DomainError):
        min_st_vertex_cut(g, {1}, {9}, cap)


@pytest.mark.parametrize("trial", range(60))
def test_min_cut_matches_exhaustive_oracle(trial):
    rng = np.random.default_rng(1000 + trial)
    n = int(rng.integers(3, 9))
    g = gnp(n, float(rng.uniform(0.2, 0.8)), rng)
    cap = (
        CapacityAssignment.unit(g)
        if trial % 2
        else CapacityAssignment.from_weights(g, random_sizes(g, rng))
    )
    verts = sorted(g.vertices)
    s, t = verts[0], verts[-1]
    if s == t or g.has_edge(s, t):
        return
    ours = min_st_vertex_cut(g, {s}, {t}, cap)
    ref = exhaustive_min_st_vertex_cut(g, {s}, {t}, cap)
    assert (ours is None) == (ref is None)
    if ours is not None:
        assert ours.weight == pytest.approx(ref.weight, abs=1e-9)
        assert separates(g, ours.cut, [{s}, {t}])


def test_star_three_way():
    g = Graph(range(4), [(0, 1), (0, 2), (0, 3)])
    r = three_way_cut_2approx(g, {1}, {2}, {3}, CapacityAssignment.unit(g))
    assert r.cut == {0} and r.weight == 1.0


def test_chain_three_way():
    g = path(5)
    r = three_way_cut_2approx(g, {1}, {3}, {5}, CapacityAssignment.unit(g))
    assert r.cut == {2, 4} and r.weight == 2.0


def test_triangle_three_way_uncuttable():
    g = Graph(range(3), [(0, 1), (1, 2), (0, 2)])
    assert three_way_cut_2approx(g, {0}, {1}, {2}, CapacityAssignment.unit(g)) is None
    assert optimal_three_way_cut(g, {0}, {1}, {2}, CapacityAssignment.unit(g)) is None


@pytest.mark.parametrize("trial", range(40))
def test_three_way_within_twice_optimal(trial):
    rng = np.random.default_rng(2000 + trial)
    n = int(rng.integers(4, 10))
    g = gnp(n, float(rng.uniform(0.2, 0.7)), rng)
    verts = sorted(g.vertices)
    picks = rng.choice(verts, size=3, replace=False)
    wa, wb, wc = ({int(v)} for v in picks)
    cap = CapacityAssignment.unit(g)
    approx = three_way_cut_2approx(g, wa, wb, wc, cap)
    opt = optimal_three_way_cut(g, wa, wb, wc, cap)
    assert (approx is None) == (opt is None)
    if approx is not None:
        assert separates(g, approx.cut, [wa, wb, wc])
        assert approx.weight <= 2 * opt.weight + 1e-9


def test_menger_on_grid():
    # 3x3 grid, opposite corners: 2 disjoint paths, cut weight 2
    def vid(r, c):
        return 3 * r + c

    edges = []
    for r in range(3):
        for c in range(3):
            if c + 1 < 3:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < 3:
                edges.append((vid(r, c), vid(r + 1, c)))
    g = Graph(range(9), edges)
    cut = min_st_vertex_cut(g, {0}, {8}, CapacityAssignment.unit(g))
    assert cut.weight == 2.0
    assert max_vertex_disjoint_paths(g, {0}, {8}) == 2
