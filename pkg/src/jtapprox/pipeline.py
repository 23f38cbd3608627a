"""End-to-end driver: graph in, junction tree plus run report out.

The stages are fixed: strip simplicial vertices, split the residual
into connected components, escalate a triangulation per component,
union the fills, minimize them globally, then build and verify the
junction tree of the filled graph and compute its metrics. Every
number in the report is recomputable from the serialized artifacts.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .chordal import (
    JunctionTree,
    build_junction_tree,
    check_chordal,
    compute_metrics,
    extract_cliques,
    verify_junction_tree,
)
from .errors import DomainError, InvariantError
from .graph import (
    Graph,
    StateSpace,
    connected_components,
    induced_subgraph,
    strip_simplicial,
    with_edges,
)
from .minimize import minimize_fill
from .triangulate import EscalationPolicy, escalate, greedy_min_weight

MODE_CARD = "card"
MODE_WEIGHTED = "weighted"


@dataclass(frozen=True)
class ComponentReport:
    """One residual component's escalation outcome."""

    vertices: int
    edges: int
    k_accepted: float
    largest_clique_size: int
    ratio_bound: float | None
    certified: bool
    wall_ms: float

    def to_json(self) -> dict:
        return {
            "vertices": self.vertices,
            "edges": self.edges,
            "k_accepted": self.k_accepted,
            "l": self.largest_clique_size,
            "ratio_bound": self.ratio_bound,
            "certified": self.certified,
            "wall_ms": round(self.wall_ms, 3),
        }


@dataclass(frozen=True)
class RunReport:
    """Pipeline outcome. l is the largest bag of the final tree;
    ratio_bound divides l by the best certified lower bound on the
    optimum (accepted thresholds with a failure one step below, plus
    the largest clique closed over while stripping simplicial
    vertices) and is null whenever any component's threshold was
    reached by a jump, which breaks the failure-at-k-minus-1 premise.
    """

    n: int
    m: int
    mode: str
    alpha: float
    k_accepted: float | None
    largest_clique_size: int
    ratio_bound: float | None
    M: float
    T: float
    fills_before: int
    fills_after: int
    wall_ms: float
    stripped: int
    stripped_max_clique: int
    components: tuple[ComponentReport, ...]
    tree: JunctionTree
    kept_fills: frozenset[tuple[int, int]]
    ordering: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "mode": self.mode,
            "alpha": self.alpha,
            "k_accepted": self.k_accepted,
            "l": self.largest_clique_size,
            "ratio_bound": self.ratio_bound,
            "M": self.M,
            "T": self.T,
            "fills_before": self.fills_before,
            "fills_after": self.fills_after,
            "wall_ms": round(self.wall_ms, 3),
            "stripped": self.stripped,
            "stripped_max_clique": self.stripped_max_clique,
            "components": [c.to_json() for c in self.components],
        }


def run_pipeline(
    graph: Graph,
    ss: StateSpace | None = None,
    *,
    mode: str = MODE_CARD,
    alpha: float = 2.0,
    jump: str = "inc",
    minimize: bool = True,
    force_tree: bool = False,
) -> RunReport:
    """Triangulate, minimize, and package a verified junction tree.

    Metrics always need vertex weights; without a state space every
    vertex defaults to two states, so M equals the largest bag size.
    """
    if mode not in (MODE_CARD, MODE_WEIGHTED):
        raise DomainError(f"unknown mode {mode!r}")
    if mode == MODE_WEIGHTED and ss is None:
        raise DomainError("weighted mode needs a state space")
    t0 = time.perf_counter()

    residual, strip_order = strip_simplicial(graph)
    stripped_max = 0
    shrinking = {v: set(graph.neighbors(v)) for v in graph.vertices}
    for v in strip_order:
        stripped_max = max(stripped_max, 1 + len(shrinking[v]))
        for u in shrinking[v]:
            shrinking[u].discard(v)
        del shrinking[v]

    policy = EscalationPolicy(jump=jump)
    esc_ss = ss if mode == MODE_WEIGHTED else None
    fills: set[tuple[int, int]] = set()
    ordering: list[int] = list(strip_order)
    comps: list[ComponentReport] = []
    for part in sorted(connected_components(residual), key=min):
        sub = induced_subgraph(residual, part)
        c0 = time.perf_counter()
        k, res = escalate(sub, alpha, policy, ss=esc_ss)
        c_ms = (time.perf_counter() - c0) * 1000.0
        fills |= res.fill_edges
        ordering.extend(res.ordering)
        certified = res.ratio_bound is not None or (
            mode == MODE_CARD and k == 1.0
        )
        comps.append(
            ComponentReport(
                sub.n, sub.m, k if mode == MODE_WEIGHTED else int(k),
                res.largest_clique_size, res.ratio_bound, certified, c_ms,
            )
        )

    fills_before = len(fills)
    if minimize and fills:
        kept = minimize_fill(graph, fills, ordering).kept
    else:
        kept = frozenset(fills)

    filled = with_edges(graph, kept)
    chord = check_chordal(filled)
    if not chord.is_chordal:
        raise InvariantError("pipeline produced a non-chordal graph")
    cliques = extract_cliques(filled, chord.peo)
    jt = build_junction_tree(cliques, force_tree=force_tree)
    ok, why = verify_junction_tree(jt, filled)
    if not ok:
        raise InvariantError(f"junction tree failed verification: {why}")
    metrics = compute_metrics(jt, ss if ss is not None else StateSpace({v: 2 for v in graph.vertices}))

    k_accepted = max((c.k_accepted for c in comps), default=None)
    if k_accepted is not None and mode == MODE_CARD:
        k_accepted = int(k_accepted)
    lower = 0.0
    if mode == MODE_CARD and comps and all(c.certified for c in comps):
        lower = max(max(c.k_accepted for c in comps), stripped_max)
    elif mode == MODE_CARD and not comps:
        lower = stripped_max
    ratio = metrics.largest_bag_size / lower if lower >= 1 else None

    return RunReport(
        n=graph.n,
        m=graph.m,
        mode=mode,
        alpha=alpha,
        k_accepted=k_accepted,
        largest_clique_size=metrics.largest_bag_size,
        ratio_bound=ratio,
        M=metrics.M,
        T=metrics.T,
        fills_before=fills_before,
        fills_after=len(kept),
        wall_ms=(time.perf_counter() - t0) * 1000.0,
        stripped=len(strip_order),
        stripped_max_clique=stripped_max,
        components=tuple(comps),
        tree=jt,
        kept_fills=frozenset(kept),
        ordering=tuple(ordering),
    )


def run_baseline(graph: Graph, ss: StateSpace | None = None, *, minimize: bool = True):
    """Greedy minimum-weight elimination followed by the same fill
    minimization and tree construction; the comparison baseline."""
    res = greedy_min_weight(graph, ss)
    if minimize and res.fill_edges:
        kept = minimize_fill(graph, res.fill_edges, res.ordering).kept
    else:
        kept = res.fill_edges
    filled = with_edges(graph, kept)
    chord = check_chordal(filled)
    if not chord.is_chordal:
        raise InvariantError("baseline produced a non-chordal graph")
    jt = build_junction_tree(extract_cliques(filled, chord.peo))
    return compute_metrics(jt, ss if ss is not None else StateSpace({v: 2 for v in graph.vertices}))
