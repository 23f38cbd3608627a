"""Vertex-capacitated cut primitives.

Minimum s-t vertex cuts are computed by the vertex-splitting reduction
(each finite vertex v becomes an arc v_in -> v_out with capacity
cap(v); graph edges become infinite arcs both ways) followed by
max-flow. The minimum cut is read off the saturated vertex arcs, then
re-verified structurally; a cut is never trusted from flow bookkeeping
alone. Terminal vertices are wired so that paths bypass their own
capacity arc, so a returned cut never contains a terminal.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import kernels
from .errors import DomainError, InvariantError
from .graph import Graph

INFINITE = float("inf")

# Lenient tolerance for comparisons between weighted (log2) capacities.
TOL = 1e-9


@dataclass(frozen=True)
class CapacityAssignment:
    """A capacity for every vertex of the target graph; INFINITE marks
    vertices that must never appear in a cut."""

    cap: dict[int, float]

    @classmethod
    def unit(cls, graph: Graph) -> "CapacityAssignment":
        return cls({v: 1.0 for v in graph.vertices})

    @classmethod
    def from_weights(cls, graph: Graph, ss) -> "CapacityAssignment":
        return cls({v: ss.weight(v) for v in graph.vertices})

    def with_infinite(self, vertices: Iterable[int]) -> "CapacityAssignment":
        new = dict(self.cap)
        for v in vertices:
            new[v] = INFINITE
        return CapacityAssignment(new)

    def restricted_to(self, vertices: Iterable[int]) -> "CapacityAssignment":
        return CapacityAssignment({v: self.cap[v] for v in vertices})

    def of(self, v: int) -> float:
        try:
            return self.cap[v]
        except KeyError:
            raise DomainError(f"no capacity for vertex {v}") from None

    def weight_of(self, vertices: Iterable[int]) -> float:
        """Capacity sum in increasing id order (deterministic float result)."""
        return sum(self.cap[v] for v in sorted(vertices))


@dataclass(frozen=True)
class CutResult:
    """A vertex cut and its capacity sum."""

    cut: frozenset[int]
    weight: float


def _check_terminals(graph: Graph, s_set: frozenset, t_set: frozenset):
    if not s_set or not t_set:
        raise DomainError("terminal sets must be nonempty")
    if s_set & t_set:
        raise DomainError("terminal sets must be disjoint")
    for side in (s_set, t_set):
        if not side <= graph.vertices:
            raise DomainError(f"terminals {sorted(side - graph.vertices)} not in graph")


def separates(graph: Graph, cut: Iterable[int], groups: list[Iterable[int]]) -> bool:
    """True when removing `cut` leaves the groups pairwise disconnected."""
    removed = set(cut)
    group_sets = [set(g) - removed for g in groups]
    seen: dict[int, int] = {}
    for gi, g in enumerate(group_sets):
        for start in g:
            if start in seen:
                if seen[start] != gi:
                    return False
                continue
            comp = {start}
            queue = deque([start])
            while queue:
                u = queue.popleft()
                for v in graph.neighbors(u):
                    if v not in removed and v not in comp:
                        comp.add(v)
                        queue.append(v)
            for u in comp:
                if u in seen and seen[u] != gi:
                    return False
                seen[u] = gi
    return True


class StCutSolver:
    """Reusable minimum s-t vertex cut solver for one (graph, capacity)
    pair. The split-vertex flow network is materialized once; each
    min_cut call works on a copy, so many terminal pairs over the same
    graph avoid rebuilding the arc matrix."""

    def __init__(self, graph: Graph, cap: CapacityAssignment):
        self.graph = graph
        self.cap = cap
        self.verts = sorted(graph.vertices)
        self.idx = {v: i for i, v in enumerate(self.verts)}
        nv = len(self.verts)
        self.nv = nv
        self.src = 2 * nv
        self.snk = 2 * nv + 1
        base = np.zeros((2 * nv + 2, 2 * nv + 2), dtype=np.float64)
        for v in self.verts:
            base[self.idx[v], nv + self.idx[v]] = cap.of(v)
        for u, v in graph.edges():
            base[nv + self.idx[u], self.idx[v]] = np.inf
            base[nv + self.idx[v], self.idx[u]] = np.inf
        self._base = base

    def min_cut(
        self,
        s_set: Iterable[int],
        t_set: Iterable[int],
        *,
        infinite: Iterable[int] = (),
        limit: float = INFINITE,
        verify: bool = True,
    ) -> CutResult | None:
        """Minimum cut for one terminal pair over the prebuilt network.

        `infinite` protects extra vertices for this call only (their
        capacity arc is raised to INFINITE on the working copy).
        `limit` abandons the search and returns None as soon as the
        flow provably exceeds it; callers use it to discard candidates
        that no downstream test could keep. verify=False skips the
        separation re-check; only callers that re-derive the component
        structure from the cut afterwards may pass it.
        """
        s_set = frozenset(s_set)
        t_set = frozenset(t_set)
        _check_terminals(self.graph, s_set, t_set)
        nv = self.nv
        res = self._base.copy()
        protected = frozenset(infinite)
        for v in protected:
            res[self.idx[v], nv + self.idx[v]] = np.inf
        for s in s_set:
            res[self.src, nv + self.idx[s]] = np.inf  # inject past s's own capacity arc
        for t in t_set:
            res[self.idx[t], self.snk] = np.inf  # drain before t's own capacity arc

        flow = kernels.maxflow(res, self.src, self.snk, limit)
        if flow == np.inf or flow > limit:
            return None

        reach = kernels.residual_reachable(res, self.src)
        cut = frozenset(
            v for v in self.verts if reach[self.idx[v]] and not reach[nv + self.idx[v]]
        )
        weight = self.cap.weight_of(cut)

        if cut & (s_set | t_set):
            raise InvariantError("cut contains a terminal")
        if cut & protected or any(self.cap.of(v) == INFINITE for v in cut):
            raise InvariantError("cut contains an infinite-capacity vertex")
        if verify and not separates(self.graph, cut, [s_set, t_set]):
            raise InvariantError("flow-derived cut does not separate the terminals")
        if abs(weight - flow) > 1e-6:
            raise InvariantError(f"cut weight {weight} disagrees with flow value {flow}")
        return CutResult(cut, weight)


class FlowNetwork:
    """Adjacency-list form of the split-vertex network, for the batched
    cut kernel. Arcs are stored in (forward, reverse) pairs; every
    vertex gets a zero-capacity source and sink arc so any terminal
    choice is a pure capacity overlay on the pristine array."""

    def __init__(self, graph: Graph, cap: CapacityAssignment):
        self.graph = graph
        self.cap = cap
        self.verts = sorted(graph.vertices)
        self.idx = {v: i for i, v in enumerate(self.verts)}
        nv = len(self.verts)
        self.nv = nv
        n_nodes = 2 * nv + 2
        src = 2 * nv
        snk = 2 * nv + 1
        arc_from: list[int] = []
        arc_to: list[int] = []
        arc_cap: list[float] = []

        def add(u: int, v: int, c: float) -> int:
            arc = len(arc_to)
            arc_from.append(u)
            arc_to.append(v)
            arc_cap.append(c)
            arc_from.append(v)
            arc_to.append(u)
            arc_cap.append(0.0)
            return arc

        self.vert_arc = np.empty(nv, np.int64)
        for i, v in enumerate(self.verts):
            self.vert_arc[i] = add(i, nv + i, cap.of(v))
        for u, v in sorted(graph.edges()):
            add(nv + self.idx[u], self.idx[v], INFINITE)
            add(nv + self.idx[v], self.idx[u], INFINITE)
        self.src_arc = np.empty(nv, np.int64)
        self.snk_arc = np.empty(nv, np.int64)
        for i in range(nv):
            self.src_arc[i] = add(src, nv + i, 0.0)
            self.snk_arc[i] = add(i, snk, 0.0)

        self.arc_to = np.array(arc_to, np.int64)
        self.arc_cap0 = np.array(arc_cap, np.float64)
        counts = np.zeros(n_nodes + 1, np.int64)
        for u in arc_from:
            counts[u + 1] += 1
        self.csr_off = np.cumsum(counts)
        fill = self.csr_off[:-1].copy()
        self.csr_arc = np.empty(len(arc_to), np.int64)
        for arc, u in enumerate(arc_from):
            self.csr_arc[fill[u]] = arc
            fill[u] += 1

    def weight_row(self, row: np.ndarray) -> float:
        """Capacity sum of a boolean cut row, in vertex id order."""
        return self.cap.weight_of(self.decode_row(row))

    def decode_row(self, row: np.ndarray) -> frozenset[int]:
        return frozenset(self.verts[i] for i in np.nonzero(row)[0])


def min_st_vertex_cut(
    graph: Graph,
    s_set: Iterable[int],
    t_set: Iterable[int],
    cap: CapacityAssignment,
) -> CutResult | None:
    """Minimum-weight vertex cut separating `s_set` from `t_set`.

    Returns None when no finite cut exists (the terminal sets touch
    through uncuttable vertices, e.g. an edge joins them directly).
    The returned cut avoids all terminals and all INFINITE vertices.
    """
    return StCutSolver(graph, cap).min_cut(s_set, t_set)


def three_way_cut_2approx(
    graph: Graph,
    w_a: Iterable[int],
    w_b: Iterable[int],
    w_c: Iterable[int],
    cap: CapacityAssignment,
    *,
    solver: StCutSolver | None = None,
    infinite: Iterable[int] = (),
    limit: float = INFINITE,
) -> CutResult | None:
    """A 3-way vertex cut within twice the optimum.

    Takes the three pairwise minimum cuts and unions the two cheapest
    (ties broken in AB, AC, BC order). Each pairwise cut weighs no more
    than an optimal 3-way cut, hence the factor 2. The union is
    re-verified to pairwise-disconnect the terminal sets; in the rare
    tie layouts where it does not, the isolating cuts (each terminal
    set against the union of the other two) are used instead, whose
    two-cheapest union is always valid and also within the same factor.

    A prebuilt `solver` over (graph, cap) can be supplied to skip the
    network construction; `infinite` adds per-call protections on top
    of the third-group protection each pairwise cut already gets, and
    `limit` abandons any constituent cut whose flow exceeds it.
    """
    w_a = frozenset(w_a)
    w_b = frozenset(w_b)
    w_c = frozenset(w_c)
    if not (w_a and w_b and w_c):
        raise DomainError("all three terminal sets must be nonempty")
    if w_a & w_b or w_a & w_c or w_b & w_c:
        raise DomainError("terminal sets must be pairwise disjoint")
    if solver is None:
        solver = StCutSolver(graph, cap)
    shield = frozenset(infinite)

    pairwise = [
        solver.min_cut(w_a, w_b, infinite=shield | w_c, limit=limit),
        solver.min_cut(w_a, w_c, infinite=shield | w_b, limit=limit),
        solver.min_cut(w_b, w_c, infinite=shield | w_a, limit=limit),
    ]
    if any(r is None for r in pairwise):
        return None
    ranked = sorted(range(3), key=lambda i: (pairwise[i].weight, i))
    union = pairwise[ranked[0]].cut | pairwise[ranked[1]].cut
    if not separates(graph, union, [w_a, w_b, w_c]):
        isolating = [
            solver.min_cut(w_a, w_b | w_c, infinite=shield, limit=limit),
            solver.min_cut(w_b, w_a | w_c, infinite=shield, limit=limit),
            solver.min_cut(w_c, w_a | w_b, infinite=shield, limit=limit),
        ]
        if any(r is None for r in isolating):
            # with a finite limit an isolating cut may merely have been
            # abandoned; without one, a missing isolating cut would mean
            # an uncuttable side that the pairwise cuts must have hit
            if limit != INFINITE:
                return None
            raise InvariantError("isolating cut missing despite finite pairwise cuts")
        ranked = sorted(range(3), key=lambda i: (isolating[i].weight, i))
        union = isolating[ranked[0]].cut | isolating[ranked[1]].cut
        if not separates(graph, union, [w_a, w_b, w_c]):
            raise InvariantError("isolating-cut union fails to separate the terminals")
    return CutResult(frozenset(union), cap.weight_of(union))
