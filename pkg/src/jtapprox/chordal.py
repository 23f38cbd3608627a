"""Chordality recognition, maximal cliques, junction trees, and metrics.

Recognition is maximum-cardinality search with ties broken by lowest
vertex id; on failure a chordless cycle of length >= 4 is returned as a
checkable witness. Junction trees are built as maximum-weight spanning
trees over clique intersection sizes and re-verified by an independent
running-intersection pass, never trusted from construction bookkeeping.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .errors import DomainError, InvariantError, ParseError
from .graph import Graph, StateSpace


@dataclass(frozen=True)
class ChordalityResult:
    """Either a perfect elimination ordering or a witness cycle."""

    peo: tuple[int, ...] | None
    witness_cycle: tuple[int, ...] | None

    @property
    def is_chordal(self) -> bool:
        return self.peo is not None


@dataclass(frozen=True)
class JunctionTree:
    """Bags (maximal cliques) plus tree edges between bag indices.

    For a disconnected graph the edges form a forest; each vertex's
    bags still induce a connected subtree.
    """

    bags: tuple[frozenset[int], ...]
    tree_edges: tuple[tuple[int, int], ...]

    @property
    def is_tree(self) -> bool:
        return len(self.tree_edges) == len(self.bags) - 1

    def separator(self, i: int, j: int) -> frozenset[int]:
        return self.bags[i] & self.bags[j]


@dataclass(frozen=True)
class Metrics:
    """Log2 state space of the heaviest bag (M) and of all bags (T)."""

    M: float
    T: float
    largest_bag_size: int


def _mcs_order(graph: Graph) -> list[int]:
    """Maximum-cardinality search visit order, lowest id on ties."""
    weight = {v: 0 for v in graph.vertices}
    order: list[int] = []
    unvisited = set(graph.vertices)
    while unvisited:
        v = min(unvisited, key=lambda u: (-weight[u], u))
        order.append(v)
        unvisited.discard(v)
        for u in graph.neighbors(v):
            if u in unvisited:
                weight[u] += 1
    return order


def verify_peo(graph: Graph, peo: Iterable[int]) -> bool:
    """True when every vertex's later neighbors form a clique."""
    peo = list(peo)
    if sorted(peo) != sorted(graph.vertices):
        return False
    pos = {v: i for i, v in enumerate(peo)}
    for v in peo:
        later = sorted((u for u in graph.neighbors(v) if pos[u] > pos[v]), key=pos.get)
        for i in range(len(later)):
            for j in range(i + 1, len(later)):
                if not graph.has_edge(later[i], later[j]):
                    return False
    return True


def _witness_cycle(graph: Graph, v: int, a: int, b: int) -> tuple[int, ...]:
    """A chordless cycle through v given non-adjacent later neighbors a, b.

    A shortest a-b path avoiding N[v] minus {a, b} closes into a cycle
    with v; shortestness makes the path induced and no cycle vertex
    except a, b neighbors v, so the cycle has no chord.
    """
    blocked = (set(graph.neighbors(v)) | {v}) - {a, b}
    prev = {a: None}
    queue = deque([a])
    while queue:
        u = queue.popleft()
        if u == b:
            break
        for w in sorted(graph.neighbors(u)):
            if w not in blocked and w not in prev:
                prev[w] = u
                queue.append(w)
    if b not in prev:
        raise InvariantError("witness path vanished; peo verification disagrees with search")
    path = [b]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    path.reverse()
    return tuple([v] + path)


def check_chordal(graph: Graph) -> ChordalityResult:
    """Recognize chordal graphs; produce a PEO or a chordless cycle."""
    order = _mcs_order(graph)
    peo = list(reversed(order))
    pos = {v: i for i, v in enumerate(peo)}
    for v in peo:
        later = sorted((u for u in graph.neighbors(v) if pos[u] > pos[v]), key=pos.get)
        for i in range(len(later)):
            for j in range(i + 1, len(later)):
                if not graph.has_edge(later[i], later[j]):
                    cycle = _witness_cycle(graph, v, later[i], later[j])
                    if len(cycle) < 4:
                        raise InvariantError("witness cycle shorter than 4")
                    return ChordalityResult(None, cycle)
    return ChordalityResult(tuple(peo), None)


def is_chordless_cycle(graph: Graph, cycle: Iterable[int]) -> bool:
    """Checks a witness: a simple cycle of length >= 4 with no chord."""
    cyc = list(cycle)
    if len(cyc) < 4 or len(set(cyc)) != len(cyc):
        return False
    k = len(cyc)
    for i in range(k):
        for j in range(i + 1, k):
            adjacent_on_cycle = j - i == 1 or (i == 0 and j == k - 1)
            if graph.has_edge(cyc[i], cyc[j]) != adjacent_on_cycle:
                return False
    return True


def extract_cliques(graph: Graph, peo: Iterable[int]) -> list[frozenset[int]]:
    """The maximal cliques of a chordal graph, each exactly once.

    Candidates are each vertex with its later neighbors along the PEO;
    non-maximal candidates are filtered out. Output is sorted by the
    candidates' sorted vertex tuples for determinism.
    """
    peo = list(peo)
    if not verify_peo(graph, peo):
        raise DomainError("ordering is not a perfect elimination ordering of the graph")
    pos = {v: i for i, v in enumerate(peo)}
    candidates = []
    for v in peo:
        later = frozenset(u for u in graph.neighbors(v) if pos[u] > pos[v])
        candidates.append(frozenset({v}) | later)
    unique = set(candidates)
    maximal = [c for c in unique if not any(c < d for d in unique)]
    return sorted(maximal, key=lambda c: sorted(c))


def build_junction_tree(cliques: list[frozenset[int]], force_tree: bool = False) -> JunctionTree:
    """Connect cliques by a maximum-weight spanning tree on intersection
    sizes, which realizes the running intersection property.

    Ties are broken by (larger intersection, smaller bag index pair).
    Zero-weight links across graph components are added only when
    force_tree is set; otherwise the result is a forest for
    disconnected inputs. The result is always re-verified.
    """
    bags = tuple(frozenset(c) for c in cliques)
    if not bags:
        return JunctionTree((), ())
    if len(set(bags)) != len(bags):
        raise DomainError("duplicate bags")
    weighted = sorted(
        ((i, j) for i in range(len(bags)) for j in range(i + 1, len(bags))),
        key=lambda ij: (-len(bags[ij[0]] & bags[ij[1]]), ij),
    )
    parent = list(range(len(bags)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    edges: list[tuple[int, int]] = []
    for i, j in weighted:
        if not force_tree and not bags[i] & bags[j]:
            continue
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            edges.append((i, j))
    jt = JunctionTree(bags, tuple(edges))
    ok, why = verify_junction_tree(jt)
    if not ok:
        raise InvariantError(f"constructed junction tree fails verification: {why}")
    return jt


def verify_junction_tree(jt: JunctionTree, graph: Graph | None = None) -> tuple[bool, str]:
    """Independent check of the junction tree invariants.

    Verifies acyclicity, the running intersection property (the bags
    holding each vertex induce a connected subtree), and, when a graph
    is supplied, that each bag is a clique of it, every edge is covered
    by some bag, and the bags are exactly its maximal cliques.
    """
    nb = len(jt.bags)
    adj: dict[int, list[int]] = {i: [] for i in range(nb)}
    for i, j in jt.tree_edges:
        if not (0 <= i < nb and 0 <= j < nb) or i == j:
            return False, f"bad tree edge ({i}, {j})"
        adj[i].append(j)
        adj[j].append(i)
    # acyclic: every connected part has exactly |part| - 1 edges
    seen: set[int] = set()
    for start in range(nb):
        if start in seen:
            continue
        comp = {start}
        queue = deque([start])
        edge_count = 0
        while queue:
            u = queue.popleft()
            edge_count += len(adj[u])
            for v in adj[u]:
                if v not in comp:
                    comp.add(v)
                    queue.append(v)
        if edge_count != 2 * (len(comp) - 1):
            return False, "tree edges contain a cycle"
        seen |= comp
    vertices = set().union(*jt.bags) if jt.bags else set()
    for v in sorted(vertices):
        holding = [i for i in range(nb) if v in jt.bags[i]]
        comp = {holding[0]}
        queue = deque([holding[0]])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in comp and v in jt.bags[w]:
                    comp.add(w)
                    queue.append(w)
        if comp != set(holding):
            return False, f"bags containing vertex {v} are not connected"
    if graph is not None:
        if vertices != set(graph.vertices):
            return False, "bag union differs from the vertex set"
        for bag in jt.bags:
            bs = sorted(bag)
            for i in range(len(bs)):
                for j in range(i + 1, len(bs)):
                    if not graph.has_edge(bs[i], bs[j]):
                        return False, f"bag {bs} is not a clique"
        for u, v in graph.edges():
            if not any(u in bag and v in bag for bag in jt.bags):
                return False, f"edge ({u}, {v}) not covered by any bag"
        for a in range(nb):
            for b in range(nb):
                if a != b and jt.bags[a] <= jt.bags[b]:
                    return False, f"bag {sorted(jt.bags[a])} is not maximal"
    return True, "ok"


def compute_metrics(jt: JunctionTree, ss: StateSpace) -> Metrics:
    """M = heaviest bag weight, T = log2 of the summed bag state spaces.

    T is accumulated log-sum-exp style so huge state spaces cannot
    overflow; both values are exact up to 1e-9.
    """
    if not jt.bags:
        return Metrics(0.0, 0.0, 0)
    bag_weights = []
    for bag in jt.bags:
        if not ss.covers(bag):
            raise DomainError(f"missing state size inside bag {sorted(bag)}")
        bag_weights.append(ss.weight_of(bag))
    m_val = max(bag_weights)
    t_val = m_val + math.log2(sum(2.0 ** (bw - m_val) for bw in bag_weights))
    return Metrics(m_val, t_val, max(len(bag) for bag in jt.bags))


def format_td(jt: JunctionTree, n: int) -> str:
    """Serialize: `s td <#bags> <max-bag-size> <n>`, `b` lines, edge lines."""
    max_bag = max((len(b) for b in jt.bags), default=0)
    lines = [f"s td {len(jt.bags)} {max_bag} {n}"]
    for i, bag in enumerate(jt.bags, start=1):
        lines.append("b " + " ".join(str(v) for v in ([i] + sorted(bag))))
    for i, j in jt.tree_edges:
        lines.append(f"{i + 1} {j + 1}")
    return "\n".join(lines) + "\n"


def parse_td(text: str) -> tuple[JunctionTree, int]:
    """Parse the serialization back; returns the tree and declared n."""
    header = None
    bags: dict[int, frozenset[int]] = {}
    edges: list[tuple[int, int]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "s":
            if header is not None:
                raise ParseError(line_no, "duplicate header")
            if len(parts) != 5 or parts[1] != "td":
                raise ParseError(line_no, f"malformed header {line!r}")
            header = tuple(int(x) for x in parts[2:])
            continue
        if header is None:
            raise ParseError(line_no, "content before 's td' header")
        if parts[0] == "b":
            bag_id = int(parts[1])
            if bag_id in bags:
                raise ParseError(line_no, f"duplicate bag id {bag_id}")
            bags[bag_id] = frozenset(int(x) for x in parts[2:])
            continue
        if len(parts) != 2:
            raise ParseError(line_no, f"malformed tree edge line {line!r}")
        edges.append((int(parts[0]), int(parts[1])))
    if header is None:
        raise ParseError(1, "missing 's td' header")
    nbags, _, n = header
    if sorted(bags) != list(range(1, nbags + 1)):
        raise ParseError(1, f"expected bag ids 1..{nbags}")
    ordered = tuple(bags[i] for i in range(1, nbags + 1))
    tree_edges = tuple((i - 1, j - 1) for i, j in edges)
    return JunctionTree(ordered, tree_edges), n
