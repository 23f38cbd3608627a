"""Numeric kernels with a numba backend and a pure-numpy fallback.

The backend is chosen by the JTAPPROX_BACKEND environment variable
("numba" or "numpy"); set_backend() switches at runtime, which the
bench command uses to time one against the other.  Both backends run
the same function bodies (numba just compiles them), so their outputs
are bit-identical and can be compared directly in tests.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


# Residual entries at or below this are treated as exhausted arcs. True
# capacities are either inf or >= 1 (unit, or log2 of a size >= 2), so
# float error from augmentation arithmetic stays orders below it.
_EPS = 1e-9


def _maxflow(res, src, snk, limit):
    """Edmonds-Karp on a dense residual matrix, in place.

    BFS scans neighbors in increasing index order so the augmenting
    paths, and therefore the final residual matrix, are deterministic.
    Returns the total flow, or inf as soon as an augmenting path with
    an infinite bottleneck exists (the terminals cannot be cut). Stops
    early once the total exceeds `limit`; any return value above the
    limit certifies only that the true flow is at least that large.
    """
    n = res.shape[0]
    parent = np.empty(n, np.int64)
    queue = np.empty(n, np.int64)
    total = 0.0
    while total <= limit:
        for i in range(n):
            parent[i] = -1
        parent[src] = src
        queue[0] = src
        head = 0
        tail = 1
        while head < tail and parent[snk] < 0:
            u = queue[head]
            head += 1
            for v in range(n):
                if parent[v] < 0 and res[u, v] > _EPS:
                    parent[v] = u
                    queue[tail] = v
                    tail += 1
        if parent[snk] < 0:
            return total
        bott = np.inf
        v = snk
        while v != src:
            u = parent[v]
            if res[u, v] < bott:
                bott = res[u, v]
            v = u
        if bott == np.inf:
            return np.inf
        v = snk
        while v != src:
            u = parent[v]
            res[u, v] -= bott
            res[v, u] += bott
            v = u
        total += bott
    return total


def _residual_reachable(res, src):
    """Boolean mask of nodes reachable from src over positive residuals."""
    n = res.shape[0]
    seen = np.zeros(n, np.bool_)
    queue = np.empty(n, np.int64)
    seen[src] = True
    queue[0] = src
    head = 0
    tail = 1
    while head < tail:
        u = queue[head]
        head += 1
        for v in range(n):
            if not seen[v] and res[u, v] > _EPS:
                seen[v] = True
                queue[tail] = v
                tail += 1
    return seen


def _cliquewidth_dp(nbr, w):
    """Minimum over elimination orders of the heaviest clique created.

    nbr[v] is the neighbor bitmask of vertex v, w[v] its weight. State
    is the set of already-eliminated vertices; eliminating v next forms
    a clique on v plus every remaining vertex reachable from v through
    the eliminated set. Returns the optimum as a float (weights of 1.0
    everywhere give the plain cardinality value).
    """
    n = nbr.shape[0]
    size = 1 << n
    big = 1e30
    best = np.full(size, big)
    best[0] = 0.0
    for s in range(size):
        b = best[s]
        if b >= big:
            continue
        for v in range(n):
            if (s >> v) & 1:
                continue
            inside = s | (1 << v)
            reach = 1 << v
            changed = True
            while changed:
                changed = False
                for u in range(n):
                    if (reach >> u) & 1 and (inside >> u) & 1:
                        nb = nbr[u]
                        if nb & ~reach:
                            reach |= nb
                            changed = True
            q = reach & ~s & ~(1 << v)
            cost = w[v]
            for u in range(n):
                if (q >> u) & 1:
                    cost += w[u]
            val = cost if cost > b else b
            ns = s | (1 << v)
            if val < best[ns]:
                best[ns] = val
    return best[size - 1]


def _subset_sums(wts):
    """table[mask] = sum of wts over the set bits of mask."""
    n = wts.shape[0]
    size = 1 << n
    table = np.zeros(size, np.float64)
    for mask in range(1, size):
        low = mask & (-mask)
        i = 0
        probe = low >> 1
        while probe:
            i += 1
            probe >>= 1
        table[mask] = table[mask ^ low] + wts[i]
    return table


def _mask_union_table(masks):
    """table[mask] = bitwise OR of masks[i] over the set bits of mask."""
    n = masks.shape[0]
    size = 1 << n
    table = np.zeros(size, np.int64)
    for mask in range(1, size):
        low = mask & (-mask)
        i = 0
        probe = low >> 1
        while probe:
            i += 1
            probe >>= 1
        table[mask] = table[mask ^ low] | masks[i]
    return table


def _split_candidates(table, adj, t, alpha, tol):
    """Surviving (x_mask, a_mask) pairs for the monitored-set search.

    table holds subset sums of the monitored vertex weights and adj the
    subset unions of their adjacency masks (within the monitored set).
    A pair survives when X could extend a separator of measure <= t (so
    m(x) <= t), the heaviest group a stays within half the total (both
    facts hold for the separator extracted from any witness tree
    decomposition), the rest admits a split no heavier than a, a u X
    can stay under (alpha+1)t, and no edge joins a to the rest (such an
    edge makes every cut between them infinite, for any way the rest is
    split further). Comparisons are tol-lenient. Emitted x ascending,
    a by descending submask of the complement; identical on both
    backends.
    """
    size = table.shape[0]
    full = size - 1
    half = table[full] / 2.0
    xs = np.empty(0, np.int64)
    as_ = np.empty(0, np.int64)
    for phase in range(2):
        count = 0
        for x in range(size):
            if table[x] > t + tol:
                continue
            compl = full ^ x
            sub = compl
            while True:
                a = sub
                rest = compl ^ a
                ok = True
                if a == 0 and rest != 0:
                    ok = False
                elif table[a] > half + tol:
                    ok = False
                elif table[a] < table[rest] / 2.0 - tol:
                    ok = False
                elif not table[a] + table[x] < (alpha + 1.0) * t + tol:
                    ok = False
                elif adj[a] & rest:
                    ok = False
                if ok:
                    if phase == 1:
                        xs[count] = x
                        as_[count] = a
                    count += 1
                if sub == 0:
                    break
                sub = (sub - 1) & compl
        if phase == 0:
            xs = np.empty(count, np.int64)
            as_ = np.empty(count, np.int64)
    return xs, as_


def _split_enum(table, adj, rest_masks, ma, tol):
    """Two-group splits of each rest mask, for the 3-way cut fallback.

    For row i, yields (i, b_mask) for every split of rest_masks[i] into
    nonempty b and c with table[b] <= ma[i], table[c] <= table[b],
    exact mirror pairs emitted once, and no edge joining b to c (again,
    an edge would make the cut infinite). Order: rows in sequence, b by
    descending submask.
    """
    rows = np.empty(0, np.int64)
    bs = np.empty(0, np.int64)
    for phase in range(2):
        count = 0
        for i in range(rest_masks.shape[0]):
            rest = rest_masks[i]
            lim = ma[i]
            sub = rest
            while True:
                b = sub
                c = rest ^ b
                if b and c:
                    tb = table[b]
                    tc = table[c]
                    if (
                        tb <= lim + tol
                        and tc <= tb + tol
                        and not (tb == tc and b < c)
                        and not (adj[b] & c)
                    ):
                        if phase == 1:
                            rows[count] = i
                            bs[count] = b
                        count += 1
                if sub == 0:
                    break
                sub = (sub - 1) & rest
        if phase == 0:
            rows = np.empty(count, np.int64)
            bs = np.empty(count, np.int64)
    return rows, bs


def _cut_sweep(
    arc_to,
    arc_cap0,
    csr_off,
    csr_arc,
    nv,
    vert_arc,
    src_arc,
    snk_arc,
    w_workidx,
    w_bit,
    src_masks,
    snk_masks,
    prot_masks,
    extra_sink,
    limits,
):
    """Batched minimum vertex cuts over one prebuilt flow network.

    Entry e cuts the vertices flagged in src_masks[e] from those in
    snk_masks[e] (masks over monitored-set bit positions, mapped to
    network vertices through w_workidx/w_bit) plus the optional extra
    sink vertex extra_sink[e] (-1 for none); prot_masks[e] marks
    vertices whose capacity is raised to infinity for this entry.
    The flow routine is Edmonds-Karp over the adjacency lists, arc i^1
    being the reverse of arc i, with the same contract as the dense
    version: deterministic BFS (arcs in list order), inf on an infinite
    bottleneck, early stop past the limit. Returns the flow per entry
    and the cut as a boolean matrix over the vertex indices (rows stay
    False past limits[e], where no cut was extracted).
    """
    n_entries = src_masks.shape[0]
    n_nodes = 2 * nv + 2
    src = 2 * nv
    snk = 2 * nv + 1
    nw = w_bit.shape[0]
    flows = np.empty(n_entries, np.float64)
    cuts = np.zeros((n_entries, nv), np.bool_)
    cap = arc_cap0.copy()
    parent = np.empty(n_nodes, np.int64)
    queue = np.empty(n_nodes, np.int64)
    seen = np.empty(n_nodes, np.bool_)
    for e in range(n_entries):
        cap[:] = arc_cap0
        sm = src_masks[e]
        tm = snk_masks[e]
        pm = prot_masks[e]
        for i in range(nw):
            bit = np.int64(1) << w_bit[i]
            u = w_workidx[i]
            if sm & bit:
                cap[src_arc[u]] = np.inf
            if tm & bit:
                cap[snk_arc[u]] = np.inf
            if pm & bit:
                cap[vert_arc[u]] = np.inf
        if extra_sink[e] >= 0:
            cap[snk_arc[extra_sink[e]]] = np.inf
        limit = limits[e]
        flow = 0.0
        while flow <= limit:
            for i in range(n_nodes):
                parent[i] = -1
            parent[src] = -2
            queue[0] = src
            head = 0
            tail = 1
            while head < tail and parent[snk] == -1:
                u = queue[head]
                head += 1
                for j in range(csr_off[u], csr_off[u + 1]):
                    arc = csr_arc[j]
                    v = arc_to[arc]
                    if parent[v] == -1 and cap[arc] > _EPS:
                        parent[v] = arc
                        queue[tail] = v
                        tail += 1
            if parent[snk] == -1:
                break
            bott = np.inf
            v = snk
            while v != src:
                arc = parent[v]
                if cap[arc] < bott:
                    bott = cap[arc]
                v = arc_to[arc ^ 1]
            if bott == np.inf:
                flow = np.inf
                break
            v = snk
            while v != src:
                arc = parent[v]
                cap[arc] -= bott
                cap[arc ^ 1] += bott
                v = arc_to[arc ^ 1]
            flow += bott
        flows[e] = flow
        if flow != np.inf and flow <= limit:
            for i in range(n_nodes):
                seen[i] = False
            seen[src] = True
            queue[0] = src
            head = 0
            tail = 1
            while head < tail:
                u = queue[head]
                head += 1
                for j in range(csr_off[u], csr_off[u + 1]):
                    arc = csr_arc[j]
                    v = arc_to[arc]
                    if not seen[v] and cap[arc] > _EPS:
                        seen[v] = True
                        queue[tail] = v
                        tail += 1
            for i in range(nv):
                if seen[i] and not seen[nv + i]:
                    cuts[e, i] = True
    return flows, cuts


_PY_IMPLS = {
    "maxflow": _maxflow,
    "residual_reachable": _residual_reachable,
    "cliquewidth_dp": _cliquewidth_dp,
    "subset_sums": _subset_sums,
    "mask_union_table": _mask_union_table,
    "split_candidates": _split_candidates,
    "split_enum": _split_enum,
    "cut_sweep": _cut_sweep,
}

if HAS_NUMBA:
    _NUMBA_IMPLS = {name: njit(cache=True)(fn) for name, fn in _PY_IMPLS.items()}
else:  # pragma: no cover
    _NUMBA_IMPLS = dict(_PY_IMPLS)


def _initial_backend():
    name = os.environ.get("JTAPPROX_BACKEND", "numba" if HAS_NUMBA else "numpy")
    if name not in ("numba", "numpy"):
        raise ValueError(f"JTAPPROX_BACKEND must be 'numba' or 'numpy', got {name!r}")
    if name == "numba" and not HAS_NUMBA:
        name = "numpy"
    return name


_active = _initial_backend()


def current_backend() -> str:
    return _active


def set_backend(name: str) -> str:
    """Switch kernel implementations; returns the previous backend name."""
    global _active
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAS_NUMBA:
        raise ValueError("numba backend requested but numba is not importable")
    prev = _active
    _active = name
    return prev


def _impl(name):
    return (_NUMBA_IMPLS if _active == "numba" else _PY_IMPLS)[name]


def maxflow(res: np.ndarray, src: int, snk: int, limit: float = np.inf) -> float:
    return _impl("maxflow")(res, src, snk, limit)


def residual_reachable(res: np.ndarray, src: int) -> np.ndarray:
    return _impl("residual_reachable")(res, src)


def cliquewidth_dp(nbr: np.ndarray, w: np.ndarray) -> float:
    return _impl("cliquewidth_dp")(nbr, w)


def subset_sums(wts: np.ndarray) -> np.ndarray:
    return _impl("subset_sums")(wts)


def mask_union_table(masks: np.ndarray) -> np.ndarray:
    return _impl("mask_union_table")(masks)


def split_candidates(
    table: np.ndarray, adj: np.ndarray, t: float, alpha: float, tol: float
) -> tuple[np.ndarray, np.ndarray]:
    return _impl("split_candidates")(table, adj, t, alpha, tol)


def split_enum(
    table: np.ndarray, adj: np.ndarray, rest_masks: np.ndarray, ma: np.ndarray, tol: float
) -> tuple[np.ndarray, np.ndarray]:
    return _impl("split_enum")(table, adj, rest_masks, ma, tol)


def cut_sweep(
    arc_to: np.ndarray,
    arc_cap0: np.ndarray,
    csr_off: np.ndarray,
    csr_arc: np.ndarray,
    nv: int,
    vert_arc: np.ndarray,
    src_arc: np.ndarray,
    snk_arc: np.ndarray,
    w_workidx: np.ndarray,
    w_bit: np.ndarray,
    src_masks: np.ndarray,
    snk_masks: np.ndarray,
    prot_masks: np.ndarray,
    extra_sink: np.ndarray,
    limits: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    return _impl("cut_sweep")(
        arc_to,
        arc_cap0,
        csr_off,
        csr_arc,
        nv,
        vert_arc,
        src_arc,
        snk_arc,
        w_workidx,
        w_bit,
        src_masks,
        snk_masks,
        prot_masks,
        extra_sink,
        limits,
    )
