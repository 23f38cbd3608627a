"""Removal of redundant fill edges from a triangulation.

A fill set produced by recursive triangulation can over-clique: some
added edges can be deleted with the graph staying chordal. minimize_fill
sweeps the fills in reverse elimination order, tentatively deleting each
and keeping the deletion whenever chordality survives, until a full pass
removes nothing. The result is minimal: deleting any single kept fill
breaks chordality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .chordal import check_chordal
from .errors import DomainError
from .graph import Graph, edge, with_edges


@dataclass(frozen=True)
class MinimizationReport:
    """removed | kept partitions the input fill set; passes counts
    fixpoint sweeps including the final no-op pass."""

    removed: frozenset[tuple[int, int]]
    kept: frozenset[tuple[int, int]]
    passes: int


def minimize_fill(
    graph: Graph,
    fills: Iterable[tuple[int, int]],
    ordering: Iterable[int],
) -> MinimizationReport:
    """Delete redundant fill edges until the triangulation is minimal.

    Candidates are tried sorted by the later endpoint's position in
    the ordering, descending, then by the earlier endpoint's position;
    a deletion is kept iff the graph plus the remaining fills is still
    chordal. Sweeps repeat to a fixpoint, so every kept edge is
    certified non-removable against the final fill set.
    """
    fill_set = {edge(u, v) for (u, v) in fills}
    order = list(ordering)
    if sorted(order) != sorted(graph.vertices):
        raise DomainError("ordering must be a permutation of the vertices")
    if not check_chordal(with_edges(graph, fill_set)).is_chordal:
        raise DomainError("graph plus fills is not chordal")
    pos = {v: i for i, v in enumerate(order)}

    def rank(e: tuple[int, int]) -> tuple[int, int]:
        pa, pb = pos[e[0]], pos[e[1]]
        return (-max(pa, pb), min(pa, pb))

    kept = set(fill_set)
    removed: set[tuple[int, int]] = set()
    passes = 0
    changed = True
    while changed:
        passes += 1
        changed = False
        for e in sorted(kept, key=rank):
            trial = kept - {e}
            if check_chordal(with_edges(graph, trial)).is_chordal:
                kept = trial
                removed.add(e)
                changed = True
    return MinimizationReport(frozenset(removed), frozenset(kept), passes)
