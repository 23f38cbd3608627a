"""Exact brute-force references for small instances.

These are the independent side of every dual-route check in the test
suite: an elimination-order DP for exact (weighted) cliquewidth, subset
enumeration for optimal cuts, and a path packer for the max-flow
duality check. They share the weighted arithmetic of the main pipeline
(sums of log2 weights in increasing id order, tolerance 1e-9) so a
boundary instance cannot land on different sides of a comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from . import kernels
from .cuts import INFINITE, TOL, CapacityAssignment, CutResult, separates
from .errors import BudgetExceededError, DomainError
from .graph import Graph, StateSpace


@dataclass(frozen=True)
class OracleBudget:
    """Size caps; oversize inputs are refused rather than left to run forever."""

    max_n_cliquewidth: int = 16
    max_n_cut: int = 12


DEFAULT_BUDGET = OracleBudget()


def exact_cliquewidth(
    graph: Graph,
    ss: StateSpace | None = None,
    budget: OracleBudget = DEFAULT_BUDGET,
):
    """Exact optimum over all elimination orderings.

    Returns an int (smallest achievable largest-clique size) without a
    state space, or a float (smallest achievable heaviest-clique
    weight) with one. Computed by dynamic programming over eliminated
    vertex subsets.
    """
    if graph.n > budget.max_n_cliquewidth:
        raise BudgetExceededError(
            f"exact_cliquewidth refused n={graph.n} > {budget.max_n_cliquewidth}"
        )
    if graph.n == 0:
        return 0.0 if ss is not None else 0
    verts = sorted(graph.vertices)
    idx = {v: i for i, v in enumerate(verts)}
    nbr = np.zeros(len(verts), dtype=np.int64)
    for u, v in graph.edges():
        nbr[idx[u]] |= 1 << idx[v]
        nbr[idx[v]] |= 1 << idx[u]
    if ss is None:
        w = np.ones(len(verts), dtype=np.float64)
    else:
        w = np.array([ss.weight(v) for v in verts], dtype=np.float64)
    val = float(kernels.cliquewidth_dp(nbr, w))
    return val if ss is not None else int(round(val))


def cliquewidth_by_enumeration(graph: Graph, ss: StateSpace | None = None):
    """Same optimum by explicit elimination, pruned permutation search.

    Kept independent of the DP kernel (it simulates each elimination on
    real adjacency sets) so the two can cross-check each other.
    """
    if graph.n == 0:
        return 0.0 if ss is not None else 0
    measure = (lambda vs: ss.weight_of(vs)) if ss is not None else len
    best = [float("inf")]

    def go(adj: dict[int, set[int]], cur: float):
        if not adj:
            if cur < best[0]:
                best[0] = cur
            return
        for v in sorted(adj):
            clique = {v} | adj[v]
            cost = max(cur, measure(clique))
            if cost >= best[0] - TOL:
                continue
            nxt = {u: set(nb) for u, nb in adj.items() if u != v}
            for u in adj[v]:
                nxt[u].discard(v)
                nxt[u] |= adj[v] - {u, v}
            go(nxt, cost)

    go({v: set(graph.neighbors(v)) for v in graph.vertices}, 0.0)
    val = best[0]
    return val if ss is not None else int(round(val))


def _finite_candidates(graph: Graph, cap: CapacityAssignment, terminals: set[int]) -> list[int]:
    return sorted(v for v in graph.vertices if v not in terminals and cap.of(v) != INFINITE)


def _best_subset_cut(
    graph: Graph,
    cap: CapacityAssignment,
    candidates: list[int],
    groups: list[frozenset[int]],
) -> CutResult | None:
    best: tuple[float, tuple[int, ...]] | None = None
    for r in range(len(candidates) + 1):
        for combo in combinations(candidates, r):
            if best is not None and cap.weight_of(combo) >= best[0] - TOL:
                continue
            if separates(graph, combo, groups):
                w = cap.weight_of(combo)
                if best is None or w < best[0] - TOL or (abs(w - best[0]) <= TOL and combo < best[1]):
                    best = (w, combo)
    if best is None:
        return None
    return CutResult(frozenset(best[1]), best[0])


def optimal_three_way_cut(
    graph: Graph,
    w_a: Iterable[int],
    w_b: Iterable[int],
    w_c: Iterable[int],
    cap: CapacityAssignment,
    budget: OracleBudget = DEFAULT_BUDGET,
) -> CutResult | None:
    """Minimum-weight 3-way vertex cut by exhaustive subset enumeration."""
    if graph.n > budget.max_n_cut:
        raise BudgetExceededError(f"optimal_three_way_cut refused n={graph.n} > {budget.max_n_cut}")
    groups = [frozenset(w_a), frozenset(w_b), frozenset(w_c)]
    if not all(groups):
        raise DomainError("all three terminal sets must be nonempty")
    terminals = set().union(*groups)
    return _best_subset_cut(graph, cap, _finite_candidates(graph, cap, terminals), groups)


def exhaustive_min_st_vertex_cut(
    graph: Graph,
    s_set: Iterable[int],
    t_set: Iterable[int],
    cap: CapacityAssignment,
    budget: OracleBudget = DEFAULT_BUDGET,
) -> CutResult | None:
    """Minimum-weight s-t vertex cut by exhaustive subset enumeration."""
    if graph.n > budget.max_n_cut:
        raise BudgetExceededError(f"exhaustive cut refused n={graph.n} > {budget.max_n_cut}")
    groups = [frozenset(s_set), frozenset(t_set)]
    if not all(groups):
        raise DomainError("terminal sets must be nonempty")
    terminals = set().union(*groups)
    return _best_subset_cut(graph, cap, _finite_candidates(graph, cap, terminals), groups)


def max_vertex_disjoint_paths(
    graph: Graph,
    s_set: Iterable[int],
    t_set: Iterable[int],
    budget: OracleBudget = DEFAULT_BUDGET,
) -> float:
    """Maximum number of S-T paths sharing no interior vertex.

    Interior means vertices outside S and T; a maximum packing never
    needs to route through a terminal (such a path can be replaced by
    its suffix or prefix), so paths are enumerated over the interior
    only. Returns inf when an edge joins S to T directly, since such a
    path consumes no interior vertex at all.
    """
    if graph.n > budget.max_n_cut:
        raise BudgetExceededError(f"path packing refused n={graph.n} > {budget.max_n_cut}")
    s_set = frozenset(s_set)
    t_set = frozenset(t_set)
    if not s_set or not t_set or s_set & t_set:
        raise DomainError("terminal sets must be nonempty and disjoint")
    if any(graph.has_edge(s, t) for s in s_set for t in t_set):
        return float("inf")

    interior = sorted(set(graph.vertices) - s_set - t_set)
    pos = {v: i for i, v in enumerate(interior)}

    # every distinct interior set realized by a simple S-T path, as a bitmask
    masks: set[int] = set()

    def dfs(u: int, used: int):
        for v in sorted(graph.neighbors(u)):
            if v in t_set:
                masks.add(used)
            elif v in pos and not (used >> pos[v]) & 1:
                dfs(v, used | (1 << pos[v]))

    for s in sorted(s_set):
        dfs(s, 0)
    ordered = sorted(masks, key=lambda m: (bin(m).count("1"), m))

    memo: dict[tuple[int, int], bool] = {}

    def packable(avail: int, need: int) -> bool:
        if need == 0:
            return True
        key = (avail, need)
        if key in memo:
            return memo[key]
        ok = False
        for m in ordered:
            if m & ~avail:
                continue
            if packable(avail & ~m, need - 1):
                ok = True
                break
        memo[key] = ok
        return ok

    full = (1 << len(interior)) - 1
    count = 0
    while packable(full, count + 1):
        count += 1
    return float(count)
