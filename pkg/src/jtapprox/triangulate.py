"""Recursive triangulation with a provable largest-clique bound.

triangulate(G, W, k, alpha) either triangulates G so that W ends up a
clique and the largest clique stays below (2*alpha+1)*k, or reports
that the cliquewidth exceeds k. Small graphs are finished greedily; a
larger graph is split by a W-decomposition (X, A, B, C), the three
parts are triangulated recursively with X folded into their monitored
sets, and W u X is cliqued. w_triangulate is the same recursion with
vertex weights; greedy_min_weight is the leaf heuristic and doubles as
the comparison baseline. escalate drives the threshold upward until a
triangulation is found.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, replace
from typing import Iterable

from .chordal import check_chordal, extract_cliques
from .decomp import (
    MODE_CARDINALITY,
    MODE_WEIGHTED,
    DecompBudget,
    SearchStats,
    find_w_decomposition,
)
from .errors import DomainError, InvariantError
from .graph import Graph, StateSpace, add_clique_edges, edge, induced_subgraph, with_edges

VERDICT_SUCCESS = "success"
VERDICT_EXCEEDED = "cliquewidth > k"

# When set (env JTAPPROX_DEBUG=1), every recursion node re-checks that
# its glued triangulation is chordal instead of trusting the induction.
DEBUG_GLUING = os.environ.get("JTAPPROX_DEBUG", "") == "1"


@dataclass
class Trace:
    """Recursion statistics: s = max monitored-set size seen."""

    max_w_size: int = 0
    depth: int = 0
    partitions_tested: int = 0
    cuts_computed: int = 0
    nodes: int = 0


@dataclass(frozen=True)
class TriangulationResult:
    fill_edges: frozenset[tuple[int, int]]
    ordering: tuple[int, ...]
    verdict: str
    largest_clique_size: int
    ratio_bound: float | None
    trace: Trace

    @property
    def succeeded(self) -> bool:
        return self.verdict == VERDICT_SUCCESS


@dataclass(frozen=True)
class EscalationPolicy:
    """Starting threshold and the rule for raising it after a failure.

    jump "inc" raises by one, "kstar" jumps to the smallest recorded
    threshold at which any tested candidate (or a leaf condition) would
    have flipped, "weighted-margin" does the same on real thresholds
    with a geometric fallback when nothing was recorded.
    """

    start: float | None = None
    jump: str = "inc"

    def __post_init__(self):
        if self.jump not in ("inc", "kstar", "weighted-margin"):
            raise DomainError(f"unknown jump rule {self.jump!r}")


def _measure_all(budget: DecompBudget, graph: Graph) -> float:
    return budget.measure(graph.vertices)


def _greedy_elimination(graph: Graph, ss: StateSpace | None):
    """Minimum-weight elimination: order and fill edges."""
    measure = (lambda vs: ss.weight_of(vs)) if ss is not None else len
    adj = {v: set(graph.neighbors(v)) for v in graph.vertices}
    order: list[int] = []
    fills: set[tuple[int, int]] = set()
    while adj:
        v = min(sorted(adj), key=lambda u: (measure({u} | adj[u]), u))
        order.append(v)
        nbrs = sorted(adj[v])
        for i in range(len(nbrs)):
            for j in range(i + 1, len(nbrs)):
                a, b = nbrs[i], nbrs[j]
                if b not in adj[a]:
                    adj[a].add(b)
                    adj[b].add(a)
                    fills.add(edge(a, b))
        for u in nbrs:
            adj[u].discard(v)
        del adj[v]
    return order, fills


def greedy_min_weight(graph: Graph, ss: StateSpace | None = None) -> TriangulationResult:
    """Repeatedly eliminate the vertex whose closed neighborhood is
    lightest (lowest id on ties), cliquing its neighbors. Always
    succeeds; serves as the leaf heuristic and the baseline."""
    order, fills = _greedy_elimination(graph, ss)
    filled = with_edges(graph, fills)
    chord = check_chordal(filled)
    if not chord.is_chordal:
        raise InvariantError("greedy elimination produced a non-chordal graph")
    largest = max((len(c) for c in extract_cliques(filled, chord.peo)), default=0)
    return TriangulationResult(
        frozenset(fills), tuple(order), VERDICT_SUCCESS, largest, None, Trace(nodes=1)
    )


def _leaf(graph: Graph, w: frozenset[int], ss: StateSpace | None):
    """Triangulate a small graph with w pre-cliqued; returns the fill
    edges and the elimination order restricted to V - w."""
    cliqued, clique_fills = add_clique_edges(graph, w)
    order, greedy_fills = _greedy_elimination(cliqued, ss)
    fills = set(clique_fills) | greedy_fills
    return frozenset(fills), tuple(v for v in order if v not in w)


def leaf_complete(graph: Graph, w: Iterable[int], ss: StateSpace | None = None) -> frozenset:
    """Fill edges that make the graph chordal with `w` a clique.

    Greedy minimum-weight completion after pre-cliquing w; the fill
    count can never exceed cliquing all of V outright.
    """
    w = frozenset(w)
    if not w <= graph.vertices:
        raise DomainError(f"clique-target vertices {sorted(w - graph.vertices)} not in graph")
    fills, _ = _leaf(graph, w, ss)
    return fills


def _recurse(graph: Graph, w: frozenset[int], budget: DecompBudget, trace: Trace, depth: int):
    """Returns (fills, ordering-of-V-minus-w) or None on failure."""
    trace.nodes += 1
    trace.depth = max(trace.depth, depth)
    trace.max_w_size = max(trace.max_w_size, len(w))
    t = budget.k_or_m
    a = budget.alpha
    if budget.lt(_measure_all(budget, graph), (2 * a + 1) * t):
        return _leaf(graph, w, budget.state_space)

    stats = SearchStats()
    d = find_w_decomposition(graph, w, budget, stats)
    trace.partitions_tested += stats.partitions_tested
    trace.cuts_computed += stats.cuts_computed
    if d is None:
        # becoming a leaf is this node's cheapest way out at a higher
        # threshold; feed that to the escalation driver
        if budget.mode == MODE_CARDINALITY:
            budget.record_flip(float(math.floor(_measure_all(budget, graph) / (2 * a + 1)) + 1))
        else:
            budget.record_flip(_measure_all(budget, graph) / (2 * a + 1))
        return None

    fills: set[tuple[int, int]] = set()
    ordering: list[int] = []
    for part in (d.a, d.b, d.c):
        if not part:
            continue
        child = induced_subgraph(graph, part | d.x)
        if child.n >= graph.n:
            raise InvariantError("recursion failed to shrink the graph")
        sub = _recurse(child, (w & part) | d.x, budget, trace, depth + 1)
        if sub is None:
            return None
        child_fills, child_order = sub
        fills |= child_fills
        ordering.extend(child_order)
    _, clique_fills = add_clique_edges(graph, w | d.x)
    fills |= clique_fills
    ordering.extend(sorted(d.x - w))
    if DEBUG_GLUING:
        glued = with_edges(graph, fills | {e for e in _clique_pairs(w) if not graph.has_edge(*e)})
        if not check_chordal(glued).is_chordal:
            raise InvariantError("glued triangulation is not chordal at an inner node")
    return frozenset(fills), tuple(ordering)


def _clique_pairs(vertices: frozenset[int]):
    vs = sorted(vertices)
    return [(vs[i], vs[j]) for i in range(len(vs)) for j in range(i + 1, len(vs))]


def _run(graph: Graph, w: frozenset[int], budget: DecompBudget) -> TriangulationResult:
    trace = Trace()
    out = _recurse(graph, w, budget, trace, 0)
    if out is None:
        return TriangulationResult(frozenset(), (), VERDICT_EXCEEDED, 0, None, trace)
    fills, ordering = out
    filled = with_edges(graph, fills)
    chord = check_chordal(filled)
    if not chord.is_chordal:
        raise InvariantError("triangulation output is not chordal")
    for u, v in _clique_pairs(w):
        if not filled.has_edge(u, v):
            raise InvariantError("monitored set was not cliqued")
    largest = max((len(c) for c in extract_cliques(filled, chord.peo)), default=0)
    full_order = tuple(ordering) + tuple(sorted(w))
    return TriangulationResult(fills, full_order, VERDICT_SUCCESS, largest, None, trace)


def triangulate(graph: Graph, w: Iterable[int], k: int, alpha: float = 2.0) -> TriangulationResult:
    """Triangulate so that w becomes a clique and every clique stays
    below (2*alpha+1)*k vertices, or report the threshold as too small.

    The verdict "cliquewidth > k" is sound: it is only produced after
    the decomposition search at some node exhausts every partition of
    its monitored set.
    """
    w = frozenset(w)
    if not w <= graph.vertices:
        raise DomainError(f"monitored vertices {sorted(w - graph.vertices)} not in graph")
    if k < 1 or k != int(k):
        raise DomainError("k must be a positive integer")
    if not len(w) < (alpha + 1) * k:
        raise DomainError("monitored set too large for this threshold")
    budget = DecompBudget(float(int(k)), alpha, MODE_CARDINALITY)
    return _run(graph, w, budget)


def w_triangulate(
    graph: Graph,
    w: Iterable[int],
    m: float,
    alpha: float = 2.0,
    ss: StateSpace | None = None,
) -> TriangulationResult:
    """Weighted variant: clique weights (sums of log2 state sizes) stay
    below (2*alpha+1)*m on success."""
    if ss is None:
        raise DomainError("weighted triangulation needs a state space")
    w = frozenset(w)
    if not w <= graph.vertices:
        raise DomainError(f"monitored vertices {sorted(w - graph.vertices)} not in graph")
    if m <= 0:
        raise DomainError("m must be positive")
    if not ss.weight_of(w) < (alpha + 1) * m + 1e-9:
        raise DomainError("monitored set too heavy for this threshold")
    budget = DecompBudget(float(m), alpha, MODE_WEIGHTED, state_space=ss)
    return _run(graph, w, budget)


def _weighted_start(graph: Graph, ss: StateSpace) -> float:
    """Every edge lies inside some clique of any triangulation, so the
    heaviest edge is a valid lower bound on the weighted cliquewidth."""
    best = 0.0
    for u, v in graph.edges():
        best = max(best, ss.weight(u) + ss.weight(v))
    if best == 0.0:
        best = max((ss.weight(v) for v in graph.vertices), default=1.0)
    return best


def escalate(
    graph: Graph,
    alpha: float = 2.0,
    policy: EscalationPolicy = EscalationPolicy(),
    ss: StateSpace | None = None,
) -> tuple[float, TriangulationResult]:
    """Raise the threshold until triangulation succeeds.

    Returns the accepted threshold and its result. In cardinality mode
    the result carries ratio_bound = largest_clique / k whenever the
    driver also tested and failed k - 1, which certifies that the true
    cliquewidth exceeds k - 1. Always terminates: once the threshold
    reaches measure(V) / (2*alpha+1) the whole graph is a leaf.
    """
    weighted = ss is not None
    if weighted:
        m = float(policy.start) if policy.start is not None else _weighted_start(graph, ss)
    else:
        m = float(int(policy.start)) if policy.start is not None else 1.0
        if m < 1:
            raise DomainError("cardinality thresholds start at 1")
    prev_failed: float | None = None
    while True:
        recorder: list[float] = []
        mode = MODE_WEIGHTED if weighted else MODE_CARDINALITY
        budget = DecompBudget(m, alpha, mode, state_space=ss, flip_recorder=recorder)
        result = _run(graph, frozenset(), budget)
        if result.succeeded:
            ratio = None
            if not weighted and prev_failed is not None and prev_failed == m - 1:
                ratio = result.largest_clique_size / m
            return m, replace(result, ratio_bound=ratio)
        prev_failed = m
        if weighted:
            # floor the step so dense flip values cannot stall the climb;
            # overshooting the minimal threshold only loosens the bound
            flips = [f for f in recorder if f > m * 1.05]
            m = min(flips) if flips else m * 1.05
        elif policy.jump == "kstar":
            flips = [int(round(f)) for f in recorder if f > m]
            m = float(min(flips)) if flips else m + 1
        else:
            m = m + 1
