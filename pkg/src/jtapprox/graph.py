"""Immutable simple-graph values and the structural primitives built on them.

Vertices are integer ids (1..n at the file boundary). Edges are
normalized (min, max) tuples. Every mutation-shaped operation returns a
new graph plus a delta, so callers can keep the parent graph intact
across recursive calls.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Iterable, Iterator

from .errors import DomainError, ParseError


def edge(u: int, v: int) -> tuple[int, int]:
    """Normalize an unordered vertex pair to a (min, max) tuple."""
    return (u, v) if u < v else (v, u)


class Graph:
    """An immutable simple undirected graph.

    Invariants enforced at construction: adjacency is symmetric, no
    self-loops, duplicate edges collapse, every endpoint is a vertex.
    """

    __slots__ = ("_vertices", "_adj", "_m")

    def __init__(self, vertices: Iterable[int], edges: Iterable[tuple[int, int]] = ()):
        vs = frozenset(vertices)
        adj: dict[int, set[int]] = {v: set() for v in vs}
        m = 0
        for u, v in edges:
            if u == v:
                raise DomainError(f"self-loop at vertex {u}")
            if u not in vs or v not in vs:
                raise DomainError(f"edge ({u}, {v}) has an endpoint outside the vertex set")
            if v not in adj[u]:
                adj[u].add(v)
                adj[v].add(u)
                m += 1
        self._vertices = vs
        self._adj = {v: frozenset(nb) for v, nb in adj.items()}
        self._m = m

    @property
    def vertices(self) -> frozenset[int]:
        return self._vertices

    @property
    def n(self) -> int:
        return len(self._vertices)

    @property
    def m(self) -> int:
        return self._m

    def neighbors(self, v: int) -> frozenset[int]:
        try:
            return self._adj[v]
        except KeyError:
            raise DomainError(f"vertex {v} not in graph") from None

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj.get(u, ())

    def edges(self) -> Iterator[tuple[int, int]]:
        """All edges as normalized tuples, in sorted order."""
        for u in sorted(self._vertices):
            for v in sorted(self._adj[u]):
                if u < v:
                    yield (u, v)

    def __contains__(self, v: int) -> bool:
        return v in self._vertices

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._vertices == other._vertices and self._adj == other._adj

    def __hash__(self):
        return hash((self._vertices, frozenset(self.edges())))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


class StateSpace:
    """Per-vertex domain sizes; the weight of v is log2(size(v)) >= 1."""

    __slots__ = ("_sizes", "_weights")

    def __init__(self, sizes: dict[int, int]):
        for v, s in sizes.items():
            if not isinstance(s, int) or s < 2:
                raise DomainError(f"state size for vertex {v} must be an integer >= 2, got {s!r}")
        self._sizes = dict(sizes)
        self._weights = {v: math.log2(s) for v, s in self._sizes.items()}

    @classmethod
    def uniform(cls, vertices: Iterable[int], size: int = 2) -> "StateSpace":
        return cls({v: size for v in vertices})

    def size(self, v: int) -> int:
        try:
            return self._sizes[v]
        except KeyError:
            raise DomainError(f"no state size for vertex {v}") from None

    def weight(self, v: int) -> float:
        try:
            return self._weights[v]
        except KeyError:
            raise DomainError(f"no state size for vertex {v}") from None

    def weight_of(self, vertices: Iterable[int]) -> float:
        """Total weight of a vertex set, summed in increasing id order.

        The fixed summation order keeps every weight comparison in the
        package (and in the exact oracle) reproducible to the last bit.
        """
        return sum(self.weight(v) for v in sorted(vertices))

    def covers(self, vertices: Iterable[int]) -> bool:
        return all(v in self._sizes for v in vertices)

    def items(self):
        return self._sizes.items()


def parse_graph(text: str) -> Graph:
    """Parse the `.gr` format: `c` comments, one `p tw <n> <m>` header,
    then exactly m edge lines `<u> <v>` with 1-based ids and no loops.
    """
    n = None
    m = None
    edges: list[tuple[int, int]] = []
    edge_lines = 0
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if n is not None:
                raise ParseError(line_no, "duplicate header")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "tw":
                raise ParseError(line_no, f"malformed header {line!r}, expected 'p tw <n> <m>'")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(line_no, f"non-integer counts in header {line!r}") from None
            if n < 0 or m < 0:
                raise ParseError(line_no, "vertex and edge counts must be nonnegative")
            continue
        if n is None:
            raise ParseError(line_no, "edge line before header")
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(line_no, f"malformed edge line {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(line_no, f"non-integer endpoint in {line!r}") from None
        if not (1 <= u <= n and 1 <= v <= n):
            raise ParseError(line_no, f"vertex id out of range 1..{n} in {line!r}")
        if u == v:
            raise ParseError(line_no, f"self-loop at vertex {u}")
        edge_lines += 1
        edges.append(edge(u, v))
    if n is None:
        raise ParseError(1, "missing 'p tw <n> <m>' header")
    if edge_lines != m:
        raise ParseError(1, f"header declares {m} edges but {edge_lines} edge lines found")
    return Graph(range(1, n + 1), edges)


def parse_state_space(text: str, graph: Graph) -> StateSpace:
    """Parse the sidecar format: one `<v> <size>` line per vertex, size >= 2.
    Vertices absent from the file default to size 2.
    """
    sizes = {v: 2 for v in graph.vertices}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(line_no, f"malformed state-space line {line!r}")
        try:
            v, s = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(line_no, f"non-integer field in {line!r}") from None
        if v not in graph.vertices:
            raise ParseError(line_no, f"vertex {v} not in graph")
        if s < 2:
            raise ParseError(line_no, f"state size must be >= 2, got {s}")
        sizes[v] = s
    return StateSpace(sizes)


def format_graph(graph: Graph) -> str:
    """Serialize a graph back to `.gr` text."""
    lines = [f"p tw {max(graph.vertices, default=0)} {graph.m}"]
    lines.extend(f"{u} {v}" for u, v in graph.edges())
    return "\n".join(lines) + "\n"


def format_state_space(ss: StateSpace) -> str:
    return "\n".join(f"{v} {s}" for v, s in sorted(ss.items())) + "\n"


def induced_subgraph(graph: Graph, vertices: Iterable[int]) -> Graph:
    """The subgraph on `vertices` with exactly the edges inside it."""
    s = frozenset(vertices)
    if not s <= graph.vertices:
        raise DomainError(f"vertices {sorted(s - graph.vertices)} not in graph")
    return Graph(s, ((u, v) for u in s for v in graph.neighbors(u) if u < v and v in s))


def connected_components(graph: Graph) -> list[frozenset[int]]:
    """Components as vertex sets, ordered by their smallest member."""
    seen: set[int] = set()
    out = []
    for start in sorted(graph.vertices):
        if start in seen:
            continue
        comp = {start}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in sorted(graph.neighbors(u)):
                if v not in comp:
                    comp.add(v)
                    queue.append(v)
        seen |= comp
        out.append(frozenset(comp))
    return out


def is_simplicial(graph: Graph, v: int) -> bool:
    """True when v's neighbors are pairwise adjacent."""
    nb = sorted(graph.neighbors(v))
    return all(graph.has_edge(nb[i], nb[j]) for i in range(len(nb)) for j in range(i + 1, len(nb)))


def strip_simplicial(graph: Graph) -> tuple[Graph, list[int]]:
    """Repeatedly remove the lowest-id simplicial vertex until none remains.

    Returns the residual graph and the removal order. Removing a
    simplicial vertex never changes whether the rest can be triangulated
    well: its clique must appear as a bag anyway.
    """
    adj = {v: set(graph.neighbors(v)) for v in graph.vertices}
    order: list[int] = []
    candidates = set(adj)
    while candidates:
        found = None
        for v in sorted(candidates):
            nb = sorted(adj[v])
            if all(nb[j] in adj[nb[i]] for i in range(len(nb)) for j in range(i + 1, len(nb))):
                found = v
                break
        if found is None:
            break
        order.append(found)
        for u in adj[found]:
            adj[u].discard(found)
        del adj[found]
        # rescanning everything is cheap at this scale and keeps the
        # lowest-id-first rule exact after each removal
        candidates = set(adj)
    residual = Graph(adj, ((u, v) for u in adj for v in adj[u] if u < v))
    return residual, order


def add_clique_edges(graph: Graph, vertices: Iterable[int]) -> tuple[Graph, frozenset[tuple[int, int]]]:
    """Make `vertices` pairwise adjacent; returns the new graph and the
    edges that were actually added."""
    s = sorted(set(vertices))
    if not set(s) <= graph.vertices:
        raise DomainError(f"vertices {sorted(set(s) - graph.vertices)} not in graph")
    added = frozenset(
        (s[i], s[j])
        for i in range(len(s))
        for j in range(i + 1, len(s))
        if not graph.has_edge(s[i], s[j])
    )
    if not added:
        return graph, added
    return with_edges(graph, added), added


def with_edges(graph: Graph, extra: Iterable[tuple[int, int]]) -> Graph:
    """A copy of the graph with `extra` edges added."""
    extra = list(extra)
    if not extra:
        return graph
    all_edges = list(graph.edges())
    all_edges.extend(edge(u, v) for u, v in extra)
    return Graph(graph.vertices, all_edges)
